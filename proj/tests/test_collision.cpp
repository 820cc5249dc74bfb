#include <doctest.h>

#include "boltzlp/collision.hpp"

TEST_CASE("placeholder") { CHECK(true); }
