#pragma once

#include "csre4soc/api.hpp"
#include "csre4soc/catalog.hpp"
#include "csre4soc/decimal.hpp"
#include "csre4soc/error.hpp"
#include "csre4soc/history.hpp"
#include "csre4soc/recommendations.hpp"
#include "csre4soc/report.hpp"
#include "csre4soc/scoring.hpp"
#include "csre4soc/timestamp.hpp"
