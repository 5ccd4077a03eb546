#pragma once

#include "dissect/text.hpp"
#include "dissect/diff.hpp"
#include "dissect/lexer.hpp"
#include "dissect/source_scan.hpp"
#include "dissect/sources.hpp"
#include "dissect/metrics.hpp"
#include "dissect/analysis.hpp"
#include "dissect/actions.hpp"
#include "dissect/patterns.hpp"
#include "dissect/record.hpp"
#include "dissect/stats.hpp"
#include "dissect/pipeline.hpp"
