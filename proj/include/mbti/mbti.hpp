#pragma once

#include "binary_io.hpp"
#include "config.hpp"
#include "container.hpp"
#include "corpus.hpp"
#include "eda.hpp"
#include "error.hpp"
#include "features.hpp"
#include "lexicon.hpp"
#include "metrics.hpp"
#include "naive_bayes.hpp"
#include "pipeline.hpp"
#include "random.hpp"
#include "rnn.hpp"
#include "svm.hpp"
#include "textprep.hpp"
