#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bqamd/constellation.hpp"

using namespace bqamd;

TEST_CASE("smoke") { CHECK(mod_order(ModId::QAM16) == 16); }
