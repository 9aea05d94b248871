#pragma once

#include "cardsep/background.hpp"
#include "cardsep/binarize.hpp"
#include "cardsep/classify.hpp"
#include "cardsep/eval.hpp"
#include "cardsep/image.hpp"
#include "cardsep/imageio.hpp"
#include "cardsep/pipeline.hpp"
#include "cardsep/regions.hpp"
#include "cardsep/runner.hpp"
#include "cardsep/serialize.hpp"
#include "cardsep/skew.hpp"
#include "cardsep/synthgen.hpp"
