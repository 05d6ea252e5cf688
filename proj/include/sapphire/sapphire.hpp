#pragma once

#include "sapphire/backend_factory.hpp"
#include "sapphire/corpus_io.hpp"
#include "sapphire/embedding.hpp"
#include "sapphire/error.hpp"
#include "sapphire/fixture.hpp"
#include "sapphire/novelty.hpp"
#include "sapphire/problem.hpp"
#include "sapphire/remote.hpp"
#include "sapphire/report.hpp"
#include "sapphire/similarity.hpp"
#include "sapphire/text.hpp"
#include "sapphire/word_vectors.hpp"
