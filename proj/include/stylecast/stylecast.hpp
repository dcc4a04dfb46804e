#pragma once

// Convenience umbrella. Individual headers stay usable on their own.

#include "stylecast/classify.hpp"
#include "stylecast/cli.hpp"
#include "stylecast/config.hpp"
#include "stylecast/dataset.hpp"
#include "stylecast/describe.hpp"
#include "stylecast/generate.hpp"
#include "stylecast/http_providers.hpp"
#include "stylecast/manifest.hpp"
#include "stylecast/media.hpp"
#include "stylecast/pipeline.hpp"
#include "stylecast/platform.hpp"
#include "stylecast/platform_api.hpp"
#include "stylecast/questionnaire.hpp"
#include "stylecast/scoring.hpp"
#include "stylecast/signal.hpp"
#include "stylecast/style_score.hpp"
#include "stylecast/tournament.hpp"
