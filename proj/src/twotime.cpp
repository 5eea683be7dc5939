#include "spindyn/twotime.hpp"
