#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <unordered_map>

#include "mfirl/envs/blackjack.hpp"
#include "mfirl/envs/gridworld.hpp"
#include "mfirl/envs/tictactoe.hpp"
#include "mfirl/features/features.hpp"
#include "mfirl/features/scaling.hpp"
#include "test_support.hpp"

using namespace mfirl;

namespace {

/// All monomials p^i d^j u^k of total degree <= 2, in the production order.
Eigen::VectorXd degree2_monomials(double p, double d, double u) {
  Eigen::VectorXd f(10);
  const int exps[10][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                           {2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 0},
                           {1, 0, 1}, {0, 1, 1}};
  for (int i = 0; i < 10; ++i)
    f[i] = std::pow(p, exps[i][0]) * std::pow(d, exps[i][1]) *
           std::pow(u, exps[i][2]);
  return f;
}

}  // namespace

TEST_SUITE("features") {

TEST_CASE("blackjack raw features are the degree-2 monomial basis") {
  CHECK(blackjack_raw_features(12, 1, false, 10).size() == 10);
  CHECK(blackjack_raw_features(12, 1, false, 14).size() == 14);
  CHECK_THROWS(blackjack_raw_features(12, 1, false, 12));

  // corner of the normalized cube: everything but the bias vanishes
  Eigen::VectorXd lo = blackjack_raw_features(12, 1, false, 10);
  CHECK(lo[0] == 1.0);
  CHECK(lo.tail(9).cwiseAbs().maxCoeff() == 0.0);

  // opposite corner: p = d = u = 1, so every monomial equals 1
  Eigen::VectorXd hi = blackjack_raw_features(21, 10, true, 10);
  CHECK((hi - Eigen::VectorXd::Ones(10)).cwiseAbs().maxCoeff() == 0.0);

  for (int ps = 12; ps <= 21; ps += 3)
    for (int dc = 1; dc <= 10; dc += 3)
      for (int u = 0; u <= 1; ++u) {
        const double p = (ps - 12) / 9.0;
        const double d = (dc - 1) / 9.0;
        const Eigen::VectorXd got = blackjack_raw_features(ps, dc, u != 0, 10);
        const Eigen::VectorXd want = degree2_monomials(p, d, u);
        CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-15);
        // u is binary, so the u^2 column duplicates u by construction
        CHECK(got[6] == got[3]);
      }
}

TEST_CASE("blackjack extended basis adds cubics and the soft-21 flag") {
  const Eigen::VectorXd f = blackjack_raw_features(18, 4, true, 14);
  const double p = 6.0 / 9.0, d = 3.0 / 9.0;
  CHECK(f[10] == doctest::Approx(p * d * 1.0).epsilon(1e-15));
  CHECK(f[11] == doctest::Approx(p * p * p).epsilon(1e-15));
  CHECK(f[12] == doctest::Approx(d * d * d).epsilon(1e-15));
  CHECK(f[13] == 0.0);
  CHECK(blackjack_raw_features(21, 4, true, 14)[13] == 1.0);
  CHECK(blackjack_raw_features(21, 4, false, 14)[13] == 0.0);
}

TEST_CASE("gridworld raw features: coordinates plus threshold indicators") {
  CHECK(gridworld_raw_features(0, 0, 32).size() == 64);

  const Eigen::VectorXd origin = gridworld_raw_features(0, 0, 32);
  CHECK(origin[0] == 0.0);
  CHECK(origin[1] == 0.0);
  CHECK(origin.tail(62).sum() == 62.0);  // 0 < k for every threshold

  const Eigen::VectorXd far = gridworld_raw_features(31, 31, 32);
  CHECK(far[0] == 1.0);
  CHECK(far[1] == 1.0);
  CHECK(far.tail(62).sum() == 0.0);

  const Eigen::VectorXd mid = gridworld_raw_features(10, 20, 32);
  CHECK(mid[0] == doctest::Approx(10.0 / 31.0).epsilon(1e-15));
  CHECK(mid[1] == doctest::Approx(20.0 / 31.0).epsilon(1e-15));
  for (int k = 1; k < 32; ++k) {
    CHECK(mid[1 + k] == (10 < k ? 1.0 : 0.0));
    CHECK(mid[32 + k] == (20 < k ? 1.0 : 0.0));
  }
  CHECK(mid.segment(2, 31).sum() == 21.0);   // k = 11..31
  CHECK(mid.segment(33, 31).sum() == 11.0);  // k = 21..31
}

TEST_CASE("tic-tac-toe line counts on hand-checked boards") {
  const LineCounts empty = ttt_line_counts(ttt::Board{}, ttt::kX);
  CHECK(empty.singlets == 0);
  CHECK(empty.doublets == 0);
  CHECK(empty.triplets == 0);
  CHECK(empty.diversity == 0);
  CHECK(empty.crosspoints == 0);

  // lone X in the center: four singlet lines in three directions, all
  // pairwise intersections at the occupied center
  ttt::Board center{};
  center[4] = ttt::kX;
  const LineCounts c = ttt_line_counts(center, ttt::kX);
  CHECK(c.singlets == 4);
  CHECK(c.doublets == 0);
  CHECK(c.diversity == 3);
  CHECK(c.crosspoints == 0);

  // X on both ends of the main diagonal: the diagonal is a doublet, the
  // four edge lines are singlets crossing at the two free corners
  ttt::Board corners{};
  corners[0] = ttt::kX;
  corners[8] = ttt::kX;
  const LineCounts cc = ttt_line_counts(corners, ttt::kX);
  CHECK(cc.singlets == 4);
  CHECK(cc.doublets == 1);
  CHECK(cc.triplets == 0);
  CHECK(cc.diversity == 2);  // rows and columns, no free diagonal
  CHECK(cc.crosspoints == 2);  // cells 2 and 6

  // completed top row; the columns and diagonals still hold one X each
  ttt::Board row{};
  row[0] = row[1] = row[2] = ttt::kX;
  const LineCounts cr = ttt_line_counts(row, ttt::kX);
  CHECK(cr.triplets == 1);
  CHECK(cr.singlets == 5);
  CHECK(cr.doublets == 0);
  CHECK(cr.diversity == 2);
  CHECK(cr.crosspoints == 3);  // cells 4, 6 and 8

  // opponent marks block a line for both sides
  ttt::Board mixed{};
  mixed[0] = ttt::kX;
  mixed[1] = ttt::kO;
  CHECK(ttt_line_counts(mixed, ttt::kX).singlets == 2);  // col 0, main diag
  CHECK(ttt_line_counts(mixed, ttt::kX).diversity == 2);
  CHECK(ttt_line_counts(mixed, ttt::kO).singlets == 1);  // col 1
  CHECK(ttt_line_counts(mixed, ttt::kO).diversity == 1);
  CHECK(ttt_line_counts(mixed, ttt::kO).crosspoints == 0);
}

TEST_CASE("tic-tac-toe raw vector packs counts, products and cells") {
  CHECK(tictactoe_raw_features(ttt::Board{}).size() == 74);
  CHECK(tictactoe_raw_features(ttt::Board{}).cwiseAbs().maxCoeff() == 0.0);

  ttt::Board b{};
  b[0] = ttt::kX; b[8] = ttt::kX;
  b[3] = ttt::kO; b[4] = ttt::kO;
  const Eigen::VectorXd f = tictactoe_raw_features(b);

  // hand-derived line counts for this position
  Eigen::VectorXd base(10);
  base << 3, 0, 0, 2, 1,   // X: rows 0 and 2 plus col 2; crosspoint at cell 2
      2, 1, 0, 2, 0;       // O: middle-row doublet, col 1 and anti-diagonal
  CHECK((f.head(10) - base).cwiseAbs().maxCoeff() == 0.0);

  int k = 10;
  for (int i = 0; i < 10; ++i)
    for (int j = i; j < 10; ++j) CHECK(f[k++] == base[i] * base[j]);
  CHECK(k == 65);
  const double cells[9] = {1, 0, 0, -1, -1, 0, 0, 0, 1};
  for (int cell = 0; cell < 9; ++cell) CHECK(f[65 + cell] == cells[cell]);
}

TEST_CASE("affine scaler maps each component onto the target range") {
  Rng rng(3);
  Eigen::MatrixXd rows(40, 6);
  for (int i = 0; i < rows.rows(); ++i)
    for (int j = 0; j < rows.cols(); ++j)
      rows(i, j) = 10.0 * rng.uniform01() - 3.0;
  rows.col(4).setConstant(7.5);  // constant, not a bias
  rows.col(5).setOnes();         // bias

  const AffineScaler unit = AffineScaler::fit(rows, Scaling::UnitInterval);
  CHECK(unit.dim() == 6);
  Eigen::MatrixXd scaled = unit.apply_rows(rows);
  for (int j = 0; j < 4; ++j) {
    CHECK(scaled.col(j).minCoeff() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(scaled.col(j).maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK((scaled.col(4).array() == 0.5).all());
  CHECK((scaled.col(5).array() == 1.0).all());

  const AffineScaler sym = AffineScaler::fit(rows, Scaling::Symmetric);
  scaled = sym.apply_rows(rows);
  for (int j = 0; j < 4; ++j) {
    CHECK(scaled.col(j).minCoeff() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(scaled.col(j).maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK((scaled.col(4).array() == 0.0).all());  // midpoint of [-1, 1]
  CHECK((scaled.col(5).array() == 1.0).all());

  // None is the identity
  const AffineScaler none = AffineScaler::fit(rows, Scaling::None);
  CHECK((none.apply_rows(rows) - rows).cwiseAbs().maxCoeff() == 0.0);

  // apply and apply_rows agree
  const Eigen::VectorXd v = rows.row(11).transpose();
  CHECK((unit.apply(v) - unit.apply_rows(rows).row(11).transpose())
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // refitting on already-scaled data changes nothing
  const Eigen::MatrixXd unit_rows = unit.apply_rows(rows);
  const AffineScaler again = AffineScaler::fit(unit_rows, Scaling::UnitInterval);
  CHECK((again.apply_rows(unit_rows) - unit_rows).cwiseAbs().maxCoeff() <=
        1e-12);

  CHECK_THROWS(AffineScaler::fit(Eigen::MatrixXd(0, 3), Scaling::UnitInterval));
}

TEST_CASE("duplicate columns are dropped, keeping the first of each") {
  Eigen::MatrixXd m(3, 5);
  m.col(0) << 1, 2, 3;
  m.col(1) << 0, 0, 1;
  m.col(2) << 1, 2, 3;  // dup of 0
  m.col(3) << 5, 5, 5;
  m.col(4) << 0, 0, 1;  // dup of 1
  CHECK(dedup_columns(m) == std::vector<int>{0, 1, 3});
  CHECK(dedup_columns(Eigen::MatrixXd::Zero(4, 3)) == std::vector<int>{0});
}

TEST_CASE("blackjack feature map replicates the state basis per action") {
  const BlackjackEnv env;
  const auto fm = make_feature_map(env, FeatureSpec{});
  CHECK(fm->reward_dim() == 10);
  CHECK(fm->value_dim() == 20);
  CHECK(fm->scaling() == Scaling::UnitInterval);

  for (StateId s = 0; s < 200; s += 13)
    for (ActionId a = 0; a < 2; ++a) {
      const BlockVec g = fm->value_features_block(s, a);
      CHECK(g.offset == a * 10);
      CHECK((g.values - fm->reward_features(s)).cwiseAbs().maxCoeff() == 0.0);
      const Eigen::VectorXd dense = fm->value_features(s, a);
      CHECK(dense.size() == 20);
      CHECK((dense.segment(a * 10, 10) - g.values).cwiseAbs().maxCoeff() ==
            0.0);
      CHECK(dense.segment((1 - a) * 10, 10).cwiseAbs().maxCoeff() == 0.0);
    }

  // terminal state: zero reward features, no value features
  CHECK(fm->reward_features(BlackjackEnv::terminal_state()).size() == 10);
  CHECK(fm->reward_features(BlackjackEnv::terminal_state()).cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK_THROWS(fm->value_features(BlackjackEnv::terminal_state(), 0));
  CHECK_THROWS(fm->value_features(0, 2));

  // scaled into [0, 1], bias pinned at 1, u^2 still duplicating u
  for (StateId s = 0; s < 200; ++s) {
    const Eigen::VectorXd f = fm->reward_features(s);
    CHECK(f.minCoeff() >= -1e-12);
    CHECK(f.maxCoeff() <= 1.0 + 1e-12);
    CHECK(f[0] == 1.0);
    CHECK(f[6] == f[3]);
  }

  FeatureSpec wide;
  wide.blackjack_basis = 14;
  const auto fm14 = make_feature_map(env, wide);
  CHECK(fm14->reward_dim() == 14);
  CHECK(fm14->value_dim() == 28);

  FeatureSpec sym;
  sym.scaling = Scaling::Symmetric;
  const auto fmsym = make_feature_map(env, sym);
  for (StateId s = 0; s < 200; s += 7) {
    CHECK(fmsym->reward_features(s).minCoeff() >= -1.0 - 1e-12);
    CHECK(fmsym->reward_features(s)[0] == 1.0);  // bias survives
  }
}

TEST_CASE("gridworld feature map dimensions and content") {
  const GridworldEnv env;
  const auto fm = make_feature_map(env, FeatureSpec{});
  CHECK(fm->reward_dim() == 64);
  CHECK(fm->value_dim() == 5 * 64);

  // coordinates were already in [0, 1]; indicators are 0/1; scaling is a
  // no-op up to the exactness of the fitted map
  const StateId s = env.encode(10, 20);
  const Eigen::VectorXd f = fm->reward_features(s);
  CHECK((f - gridworld_raw_features(10, 20, 32)).cwiseAbs().maxCoeff() <=
        1e-12);
  for (ActionId a = 0; a < 5; ++a)
    CHECK(fm->value_features_block(s, a).offset == a * 64);
}

TEST_CASE("tic-tac-toe feature map routes actions through afterstates") {
  const TicTacToeEnv env(TicTacToeEnv::Opponent::Random);
  const auto fm = make_feature_map(env, FeatureSpec{});
  CHECK(fm->reward_dim() == fm->value_dim());
  CHECK(fm->reward_dim() < 74);  // duplicates existed in the raw basis
  CHECK(fm->reward_dim() > 10);

  // rebuild the scaled table independently from the raw features over every
  // reachable board, then compare the map's afterstate rows against it
  const std::vector<int> codes = ttt::enumerate_reachable_codes();
  Eigen::MatrixXd raw(static_cast<int>(codes.size()), 74);
  std::unordered_map<int, int> row_of;
  for (int i = 0; i < static_cast<int>(codes.size()); ++i) {
    raw.row(i) = tictactoe_raw_features(ttt::from_code(codes[i])).transpose();
    row_of[codes[i]] = i;
  }
  const std::vector<int> keep = dedup_columns(raw);
  CHECK(static_cast<int>(keep.size()) == fm->reward_dim());
  Eigen::MatrixXd reduced(raw.rows(), static_cast<int>(keep.size()));
  for (int j = 0; j < static_cast<int>(keep.size()); ++j)
    reduced.col(j) = raw.col(keep[j]);
  const AffineScaler scaler =
      AffineScaler::fit(reduced, Scaling::UnitInterval);
  const Eigen::MatrixXd table = scaler.apply_rows(reduced);

  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    const StateId s = rng.uniform_int(env.x_state_count());
    const ttt::Board b = env.board_of(s);
    CHECK((fm->reward_features(s) -
           table.row(row_of.at(ttt::code(b))).transpose())
              .cwiseAbs()
              .maxCoeff() == 0.0);
    for (const ActionId a : env.legal_actions(s)) {
      const ttt::Board after = ttt::apply_move(b, a, ttt::kX);
      const BlockVec g = fm->value_features_block(s, a);
      CHECK(g.offset == 0);
      CHECK((g.values - table.row(row_of.at(ttt::code(after))).transpose())
                .cwiseAbs()
                .maxCoeff() == 0.0);
    }
  }

  // all nine opening moves are told apart (the cell block alone does it)
  const StateId start = env.state_of(ttt::Board{});
  std::set<std::vector<double>> seen;
  for (ActionId a = 0; a < 9; ++a) {
    const Eigen::VectorXd g = fm->value_features(start, a);
    seen.insert(std::vector<double>(g.data(), g.data() + g.size()));
  }
  CHECK(seen.size() == 9);

  // playing into an occupied cell has no feature vector
  ttt::Board b{};
  b[4] = ttt::kX;
  b[0] = ttt::kO;
  CHECK_THROWS(fm->value_features(env.state_of(b), 0));
}

TEST_CASE("feature maps exist only for the known environments") {
  Rng rng(5);
  const TabularMDP mdp = test::random_mdp(rng, 3, 2, 0.9);
  const test::MdpEnv env(mdp);
  CHECK_THROWS_AS(make_feature_map(env, FeatureSpec{}), std::invalid_argument);
}

TEST_CASE("feature tables round-trip through csv") {
  const BlackjackEnv env;
  const auto fm = make_feature_map(env, FeatureSpec{});
  const std::string dir = "/tmp/mfirl_features_test";
  std::filesystem::create_directories(dir);

  write_reward_feature_csv(dir + "/r.csv", env, *fm);
  std::ifstream in(dir + "/r.csv");
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "state,f0,f1,f2,f3,f4,f5,f6,f7,f8,f9");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 201);

  write_value_feature_csv(dir + "/q.csv", env, *fm);
  std::ifstream qin(dir + "/q.csv");
  REQUIRE(std::getline(qin, line));
  CHECK(line.rfind("state,action,f0,", 0) == 0);
  rows = 0;
  while (std::getline(qin, line)) ++rows;
  CHECK(rows == 200 * 2);  // terminal excluded
}

}  // TEST_SUITE("features")
