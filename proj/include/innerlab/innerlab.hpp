#pragma once

#include "circle_core.hpp"
#include "refusal.hpp"
#include "setlab.hpp"
#include "measures.hpp"
#include "inner_eval.hpp"
#include "wepify.hpp"
#include "json_io.hpp"
#include "report.hpp"
