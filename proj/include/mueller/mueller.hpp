#pragma once

#include "canonical.hpp"
#include "choi.hpp"
#include "conetest.hpp"
#include "core.hpp"
#include "io.hpp"
#include "report.hpp"
#include "studies.hpp"
#include "witness.hpp"
