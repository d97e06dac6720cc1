#pragma once

// Umbrella header.

#include "finrag/chunker.hpp"
#include "finrag/config.hpp"
#include "finrag/corpus.hpp"
#include "finrag/embed.hpp"
#include "finrag/error.hpp"
#include "finrag/harness.hpp"
#include "finrag/metrics.hpp"
#include "finrag/qa.hpp"
#include "finrag/retriever.hpp"
#include "finrag/simcorpus.hpp"
#include "finrag/store.hpp"
