#pragma once

#include "xychain/chain.hpp"
#include "xychain/error.hpp"
#include "xychain/freefermion.hpp"
#include "xychain/linalg.hpp"
#include "xychain/qracah.hpp"
#include "xychain/qseries.hpp"
#include "xychain/report.hpp"
#include "xychain/spinoracle.hpp"
