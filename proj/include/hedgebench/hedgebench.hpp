#pragma once

#include "hedgebench/bounds.hpp"
#include "hedgebench/config.hpp"
#include "hedgebench/core.hpp"
#include "hedgebench/environments.hpp"
#include "hedgebench/harness.hpp"
#include "hedgebench/learners.hpp"
#include "hedgebench/rng.hpp"
