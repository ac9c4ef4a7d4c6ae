#pragma once

#include "gluing.hpp"
#include "lfactor.hpp"
#include "tables.hpp"
