#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "colombeau/app.hpp"

using namespace colombeau;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

RunConfig golden_config() {
  RunConfig c;
  apply_config_file(c, GOLDEN_DIR "/sweep_small.conf");
  return c;
}

}  // namespace

TEST(Golden, SweepIsReproducible) {
  const RunConfig c = golden_config();
  const std::string first = nec_sweep_csv(c, 1);
  EXPECT_EQ(first, nec_sweep_csv(c, 4));
  EXPECT_EQ(first, nec_sweep_csv(c, 1));
}

TEST(Golden, SweepMatchesPinnedFile) {
  const std::string pinned = slurp(GOLDEN_DIR "/nec_sweep_small.csv");
  ASSERT_FALSE(pinned.empty()) << "missing pinned file";
  EXPECT_EQ(nec_sweep_csv(golden_config(), 2), pinned);
}
