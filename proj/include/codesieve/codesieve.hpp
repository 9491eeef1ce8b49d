#pragma once

#include "codesieve/corpus.hpp"
#include "codesieve/corpusgen.hpp"
#include "codesieve/evaluation.hpp"
#include "codesieve/external.hpp"
#include "codesieve/gst.hpp"
#include "codesieve/index.hpp"
#include "codesieve/lexer.hpp"
#include "codesieve/parallel.hpp"
#include "codesieve/pipeline.hpp"
#include "codesieve/report.hpp"
#include "codesieve/retrieval.hpp"
#include "codesieve/types.hpp"
