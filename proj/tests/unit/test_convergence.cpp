#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "qdelaunay/convergence.hpp"
#include "qdelaunay/errors.hpp"

using namespace qdelaunay;
using qdelaunay::testing::params_for;

TEST(Convergence, MainReproductionN5) {
  const auto& p = params_for(5);
  const auto rep = convergence_study(p, 3);
  EXPECT_EQ(rep.n, 5);
  EXPECT_DOUBLE_EQ(rep.y_sph, p.y_sph);
  ASSERT_EQ(rep.rows.size(), 3u);
  for (int k = 1; k <= 3; ++k) {
    const auto& row = rep.rows[k - 1];
    EXPECT_EQ(row.k, k);
    EXPECT_TRUE(row.ok) << row.error;
    EXPECT_GT(row.ratio, 0.0);
    EXPECT_LT(row.ratio, 1.0);
    EXPECT_DOUBLE_EQ(row.ratio, row.y / p.y_sph);
  }
  EXPECT_TRUE(rep.increasing);
  EXPECT_TRUE(rep.below_one);
  EXPECT_TRUE(rep.converging());
  EXPECT_GT(rep.final_ratio, 0.98);
}

TEST(Convergence, SameVerdictN6) {
  const auto rep = convergence_study(params_for(6), 2);
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_TRUE(rep.converging());
  EXPECT_LT(rep.rows[0].ratio, rep.rows[1].ratio);
}

TEST(Convergence, RejectsBadDepth) {
  EXPECT_THROW(convergence_study(params_for(5), 0), InvalidParameter);
  EXPECT_THROW(convergence_study(params_for(5), 5), InvalidParameter);
}
