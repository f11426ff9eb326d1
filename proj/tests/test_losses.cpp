#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "oracles.hpp"
#include "soslasso/losses.hpp"
#include "soslasso/rng.hpp"

using namespace soslasso;

namespace {

MultitaskProblem random_problem(Rng& rng, int tasks, int n, int p, LossKind kind) {
  MultitaskProblem problem;
  problem.loss = kind;
  for (int t = 0; t < tasks; ++t) {
    Eigen::MatrixXd design(n, p);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < p; ++c) design(r, c) = rng.normal();
    Eigen::VectorXd response(n);
    for (int r = 0; r < n; ++r)
      response[r] = kind == LossKind::squared ? rng.normal()
                                              : (rng.uniform() < 0.5 ? -1.0 : 1.0);
    problem.add_task(std::move(design), std::move(response));
  }
  return problem;
}

GroupSet small_overlapping(int p) {
  // chain with block 4, shift 2 when the geometry allows, else one big group
  if (p >= 4 && (p - 4) % 2 == 0) return GroupSet::chain(p, 4, 2);
  std::vector<int> all(p);
  for (int j = 0; j < p; ++j) all[static_cast<std::size_t>(j)] = j;
  return GroupSet({all}, p);
}

}  // namespace

TEST_CASE("problem validation") {
  MultitaskProblem logit;
  logit.loss = LossKind::logistic;
  Eigen::MatrixXd design = Eigen::MatrixXd::Ones(3, 2);
  Eigen::VectorXd bad(3);
  bad << 1.0, 0.5, -1.0;
  CHECK_THROWS_AS(logit.add_task(design, bad), Error);
  Eigen::VectorXd good(3);
  good << 1.0, -1.0, 1.0;
  logit.add_task(design, good);
  CHECK(logit.tasks() == 1);

  MultitaskProblem uneven;
  uneven.add_task(Eigen::MatrixXd::Ones(3, 2), Eigen::VectorXd::Ones(3));
  uneven.add_task(Eigen::MatrixXd::Ones(5, 2), Eigen::VectorXd::Ones(5));
  CHECK_FALSE(uneven.equal_sample_sizes());
  CHECK_THROWS_AS(uneven.common_n(), Error);

  MultitaskProblem mismatched;
  mismatched.add_task(Eigen::MatrixXd::Ones(3, 2), Eigen::VectorXd::Ones(3));
  CHECK_THROWS_AS(mismatched.add_task(Eigen::MatrixXd::Ones(3, 4), Eigen::VectorXd::Ones(3)),
                  Error);
}

TEST_CASE("squared loss values") {
  const GroupSet gs = small_overlapping(6);
  const LiftedSpace space = make_lifted(gs, 2);

  MultitaskProblem zeros;
  zeros.add_task(Eigen::MatrixXd::Zero(4, 6), Eigen::VectorXd::Zero(4));
  zeros.add_task(Eigen::MatrixXd::Zero(4, 6), Eigen::VectorXd::Zero(4));
  const LossEval at_zero = squared_loss(zeros, space, Eigen::VectorXd::Zero(space.dup_dim()));
  CHECK(at_zero.value == 0.0);
  CHECK(at_zero.grad.isZero(0.0));

  // an exact solution gives zero residual
  Rng rng(101);
  MultitaskProblem exact;
  Eigen::VectorXd w(space.dup_dim());
  for (int i = 0; i < w.size(); ++i) w[i] = rng.uniform(-1.0, 1.0);
  Eigen::VectorXd xvec(space.dm.source_dim);
  expand_into(space.dm, w.data(), xvec.data());
  for (int t = 0; t < 2; ++t) {
    Eigen::MatrixXd design(5, 6);
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 6; ++c) design(r, c) = rng.normal();
    exact.add_task(design, design * xvec.segment(t * 6, 6));
  }
  CHECK(squared_loss(exact, space, w).value <= 1e-24);
}

TEST_CASE("squared loss gradient at the truth is the noise correlation") {
  Rng rng(103);
  const int p = 6, n = 12, tasks = 2;
  const GroupSet gs = small_overlapping(p);
  const LiftedSpace space = make_lifted(gs, tasks);

  Eigen::VectorXd w_true(space.dup_dim());
  for (int i = 0; i < w_true.size(); ++i) w_true[i] = rng.uniform(-1.0, 1.0);
  Eigen::VectorXd xvec(space.dm.source_dim);
  expand_into(space.dm, w_true.data(), xvec.data());

  MultitaskProblem problem;
  std::vector<Eigen::VectorXd> noises;
  for (int t = 0; t < tasks; ++t) {
    Eigen::MatrixXd design(n, p);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < p; ++c) design(r, c) = rng.normal();
    Eigen::VectorXd eta(n);
    for (int r = 0; r < n; ++r) eta[r] = rng.normal();
    noises.push_back(eta);
    problem.add_task(design, design * xvec.segment(t * p, p) + eta);
  }

  const LossEval eval = squared_loss(problem, space, w_true);
  // gradient w.r.t. the expanded coordinates is -(1/n) Phi^T eta per task
  Eigen::VectorXd expected(space.dm.source_dim);
  for (int t = 0; t < tasks; ++t)
    expected.segment(t * p, p) =
        -problem.designs[static_cast<std::size_t>(t)].transpose() * noises[static_cast<std::size_t>(t)] / n;
  Eigen::VectorXd expected_dup(space.dup_dim());
  scatter_into(space.dm, expected.data(), expected_dup.data());
  CHECK((eval.grad - expected_dup).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("logistic loss basics") {
  const int p = 6, n = 8, tasks = 2;
  const GroupSet gs = small_overlapping(p);
  const LiftedSpace space = make_lifted(gs, tasks);
  Rng rng(107);
  MultitaskProblem problem = random_problem(rng, tasks, n, p, LossKind::logistic);

  const double at_zero = logistic_loss(problem, space, Eigen::VectorXd::Zero(space.dup_dim())).value;
  CHECK(at_zero == doctest::Approx(tasks * std::log(2.0)).epsilon(1e-12));

  // perfectly separable data: loss decreases monotonically along the separator
  MultitaskProblem separable;
  separable.loss = LossKind::logistic;
  Eigen::MatrixXd design(6, 6);
  Eigen::VectorXd labels(6);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) design(r, c) = rng.normal();
    design(r, 0) = (r % 2 == 0 ? 1.0 : -1.0) * (1.0 + rng.uniform());
    labels[r] = r % 2 == 0 ? 1.0 : -1.0;
  }
  separable.add_task(design, labels);
  const GroupSet one = small_overlapping(6);
  const LiftedSpace sspace = make_lifted(one, 1);
  Eigen::VectorXd direction = Eigen::VectorXd::Zero(sspace.dup_dim());
  for (int i = 0; i < sspace.dup_dim(); ++i)
    if (sspace.dm.origin[static_cast<std::size_t>(i)] == 0) {
      direction[i] = 1.0;
      break;
    }
  double last = logistic_loss(separable, sspace, Eigen::VectorXd::Zero(sspace.dup_dim())).value;
  for (double scale : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double value = logistic_loss(separable, sspace, scale * direction).value;
    CHECK(value < last);
    last = value;
  }
  CHECK(last < 0.05);
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(109);
  for (int rep = 0; rep < 12; ++rep) {
    const int tasks = 1 + rng.uniform_int(3);
    const int n = 5 + rng.uniform_int(26);
    const int p = 4 + 2 * rng.uniform_int(9);  // keeps the chain geometry valid
    const LossKind kind = rep % 2 == 0 ? LossKind::squared : LossKind::logistic;
    const GroupSet gs = small_overlapping(p);
    const LiftedSpace space = make_lifted(gs, tasks);
    MultitaskProblem problem = random_problem(rng, tasks, n, p, kind);

    Eigen::VectorXd w(space.dup_dim());
    for (int i = 0; i < w.size(); ++i) w[i] = rng.uniform(-1.0, 1.0);

    LossOracle oracle(problem, space);
    Eigen::VectorXd analytic;
    oracle.value_grad(w, analytic);
    const Eigen::VectorXd numeric = oracles::fd_gradient(
        [&](const Eigen::VectorXd& point) { return LossOracle(problem, space).value(point); }, w);
    CHECK((analytic - numeric).lpNorm<Eigen::Infinity>() <= 1e-6);
  }
}

TEST_CASE("lipschitz estimate") {
  SUBCASE("orthonormal lifted design") {
    Rng rng(113);
    const int n = 12, p = 4;
    Eigen::MatrixXd raw(n, p);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < p; ++c) raw(r, c) = rng.normal();
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(raw).householderQ() *
                              Eigen::MatrixXd::Identity(n, p);
    std::vector<std::vector<int>> singles;
    for (int j = 0; j < p; ++j) singles.push_back({j});
    const GroupSet gs(singles, p);
    MultitaskProblem problem;
    problem.add_task(q, Eigen::VectorXd::Zero(n));
    const double estimate = lipschitz_estimate(problem, gs);
    CHECK(estimate == doctest::Approx(1.01 / n).epsilon(1e-3));
  }

  SUBCASE("zero design") {
    const GroupSet gs({{0, 1}}, 2);
    MultitaskProblem problem;
    problem.add_task(Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXd::Zero(3));
    CHECK(lipschitz_estimate(problem, gs) == 0.0);
  }

  SUBCASE("random design against a dense eigensolver") {
    Rng rng(127);
    const GroupSet gs = small_overlapping(10);
    const DuplicationMap dm = duplication_map(gs);
    for (int rep = 0; rep < 8; ++rep) {
      MultitaskProblem problem;
      Eigen::MatrixXd design(20, 10);
      for (int r = 0; r < 20; ++r)
        for (int c = 0; c < 10; ++c) design(r, c) = rng.normal();
      problem.add_task(design, Eigen::VectorXd::Zero(20));
      const Eigen::MatrixXd lifted = lift_design(dm, design);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lifted.transpose() * lifted,
                                                         Eigen::EigenvaluesOnly);
      const double exact = eig.eigenvalues().maxCoeff() / 20.0;
      const double estimate = lipschitz_estimate(problem, gs);
      CHECK(estimate >= exact * (1.0 - 1e-9));
      CHECK(estimate <= exact * 1.02);
    }
  }

  SUBCASE("descent lemma holds with the estimate") {
    Rng rng(131);
    const int p = 8, n = 10, tasks = 2;
    const GroupSet gs = small_overlapping(p);
    const LiftedSpace space = make_lifted(gs, tasks);
    for (LossKind kind : {LossKind::squared, LossKind::logistic}) {
      MultitaskProblem problem = random_problem(rng, tasks, n, p, kind);
      const double lip = lipschitz_estimate(problem, gs);
      LossOracle oracle(problem, space);
      for (int rep = 0; rep < 100; ++rep) {
        Eigen::VectorXd a(space.dup_dim()), b(space.dup_dim());
        for (int i = 0; i < a.size(); ++i) {
          a[i] = rng.uniform(-1.0, 1.0);
          b[i] = rng.uniform(-1.0, 1.0);
        }
        Eigen::VectorXd grad;
        const double fa = oracle.value_grad(a, grad);
        const double fb = oracle.value(b);
        const double quad = fa + grad.dot(b - a) + 0.5 * lip * (b - a).squaredNorm();
        CHECK(fb <= quad + 1e-10 * std::max(1.0, std::abs(fb)));
      }
    }
  }
}

TEST_CASE("max group singular value") {
  SUBCASE("identity designs give one") {
    const GroupSet gs = small_overlapping(6);
    MultitaskProblem problem;
    problem.add_task(Eigen::MatrixXd::Identity(6, 6), Eigen::VectorXd::Zero(6));
    problem.add_task(Eigen::MatrixXd::Identity(6, 6), Eigen::VectorXd::Zero(6));
    CHECK(max_group_singular(problem, gs) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("single all-covering group reduces to the full Gram") {
    Rng rng(137);
    std::vector<int> all(7);
    for (int j = 0; j < 7; ++j) all[static_cast<std::size_t>(j)] = j;
    const GroupSet gs({all}, 7);
    Eigen::MatrixXd design(9, 7);
    for (int r = 0; r < 9; ++r)
      for (int c = 0; c < 7; ++c) design(r, c) = rng.normal();
    MultitaskProblem problem;
    problem.add_task(design, Eigen::VectorXd::Zero(9));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(design.transpose() * design,
                                                       Eigen::EigenvaluesOnly);
    CHECK(max_group_singular(problem, gs) ==
          doctest::Approx(eig.eigenvalues().maxCoeff()).epsilon(1e-12));
  }

  SUBCASE("random instance against a per-group oracle") {
    Rng rng(139);
    const GroupSet gs = small_overlapping(10);
    MultitaskProblem problem;
    for (int t = 0; t < 3; ++t) {
      Eigen::MatrixXd design(8, 10);
      for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 10; ++c) design(r, c) = rng.normal();
      problem.add_task(design, Eigen::VectorXd::Zero(8));
    }
    double want = 0.0;
    for (int g = 0; g < gs.count(); ++g) {
      for (int t = 0; t < 3; ++t) {
        const auto& members = gs.group(g);
        const int b = static_cast<int>(members.size());
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(b, b);
        for (int i = 0; i < b; ++i)
          for (int j = 0; j < b; ++j)
            gram(i, j) = problem.designs[static_cast<std::size_t>(t)]
                             .col(members[static_cast<std::size_t>(i)])
                             .dot(problem.designs[static_cast<std::size_t>(t)]
                                      .col(members[static_cast<std::size_t>(j)]));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
        want = std::max(want, eig.eigenvalues().maxCoeff());
      }
    }
    CHECK(max_group_singular(problem, gs) == doctest::Approx(want).epsilon(1e-6));
  }
}
