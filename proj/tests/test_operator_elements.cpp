#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>
#include <thread>

#include "hidmom/eigensolver.hpp"
#include "hidmom/operator_elements.hpp"

using namespace hidmom;
using Catch::Approx;

namespace {

const std::vector<OperatorKind> kAllKinds = {
    OperatorKind::X,   OperatorKind::Y,    OperatorKind::Z,         OperatorKind::InvR,
    OperatorKind::YOverR3, OperatorKind::Py, OperatorKind::XPy,     OperatorKind::SymInvRPy,
    OperatorKind::P2,  OperatorKind::PyP2};

const std::vector<OperatorKind> kHermitianKinds = {
    OperatorKind::X,  OperatorKind::Y,  OperatorKind::Z,         OperatorKind::InvR,
    OperatorKind::P2, OperatorKind::Py, OperatorKind::SymInvRPy, OperatorKind::YOverR3};

bool selection_allowed(QuantumNumbers a, QuantumNumbers b, OperatorKind kind) {
  const int dl = std::abs(a.l - b.l);
  const int dm = a.m - b.m;
  switch (kind) {
    case OperatorKind::X:
    case OperatorKind::Y:
      return dl == 1 && std::abs(dm) == 1;
    case OperatorKind::Z:
      return dl == 1 && dm == 0;
    case OperatorKind::InvR:
    case OperatorKind::P2:
      return dl == 0 && dm == 0;
    case OperatorKind::Py:
    case OperatorKind::YOverR3:
    case OperatorKind::SymInvRPy:
    case OperatorKind::PyP2:
      return dl == 1 && std::abs(dm) == 1;
    case OperatorKind::XPy:
      return (dl == 0 || dl == 2) && (dm == 0 || std::abs(dm) == 2);
  }
  return false;
}

std::vector<QuantumNumbers> all_states(int n_max) {
  std::vector<QuantumNumbers> states;
  for (int n = 1; n <= n_max; ++n)
    for (int l = 0; l < n; ++l)
      for (int m = -l; m <= l; ++m) states.push_back({n, l, m});
  return states;
}

}  // namespace

TEST_CASE("p_y vanishes on every stationary state") {
  ElementEngine engine;
  for (const auto qn : all_states(5)) {
    CHECK(engine.element(qn, qn, OperatorKind::Py) == Complex(0.0));
  }
}

TEST_CASE("virial identity <p^2> = 1/n^2 on the diagonal") {
  ElementEngine engine;
  CHECK(engine.element({1, 0, 0}, {1, 0, 0}, OperatorKind::P2).real() ==
        Approx(1.0).epsilon(1e-12));
  for (const auto qn : {QuantumNumbers{3, 2, 1}, {5, 4, 4}, {8, 0, 0}}) {
    CHECK(engine.element(qn, qn, OperatorKind::P2).real() ==
          Approx(1.0 / (qn.n * qn.n)).epsilon(1e-11));
  }
}

TEST_CASE("<1/r> equals 1/n^2 independent of l, m") {
  ElementEngine engine;
  for (const auto qn : {QuantumNumbers{3, 2, 1}, {5, 4, 4}, {13, 12, -5}}) {
    CHECK(engine.element(qn, qn, OperatorKind::InvR).real() ==
          Approx(1.0 / (qn.n * qn.n)).epsilon(1e-11));
  }
}

TEST_CASE("x restricted to the n=2 manifold has eigenvalues {-3, +3, 0, 0}") {
  ElementEngine engine;
  const std::array<QuantumNumbers, 4> basis{{{2, 0, 0}, {2, 1, -1}, {2, 1, 0}, {2, 1, 1}}};
  std::vector<std::vector<double>> x(4, std::vector<double>(4));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const Complex e = engine.element(basis[i], basis[j], OperatorKind::X);
      CHECK(std::abs(e.imag()) < 1e-14);
      x[i][j] = e.real();
    }
  }
  const auto eig = eigen_symmetric(x);
  CHECK(eig.eigenvalues[0] == Approx(-3.0).margin(1e-12));
  CHECK(eig.eigenvalues[1] == Approx(0.0).margin(1e-12));
  CHECK(eig.eigenvalues[2] == Approx(0.0).margin(1e-12));
  CHECK(eig.eigenvalues[3] == Approx(3.0).margin(1e-12));
}

TEST_CASE("dual-strategy oracle on the named pairs") {
  ElementEngine engine;

  const auto py = engine.verify_against_direct({2, 1, 1}, {3, 2, 2}, OperatorKind::Py);
  CHECK(py.relative_gap < 1e-9);
  CHECK(std::abs(py.reduction) > 1e-4);  // the pair is selection-allowed and sizable

  const auto p2 = engine.verify_against_direct({4, 3, -2}, {4, 3, -2}, OperatorKind::P2);
  CHECK(p2.relative_gap < 1e-10);

  const auto pyp2 = engine.verify_against_direct({2, 1, 1}, {3, 0, 0}, OperatorKind::PyP2);
  CHECK(pyp2.relative_gap < 1e-8);

  CHECK_THROWS_AS(engine.verify_against_direct({1, 0, 0}, {2, 1, 1}, OperatorKind::X),
                  std::invalid_argument);
}

TEST_CASE("dual-strategy oracle on 50 random selection-allowed pairs, n <= 10") {
  ElementEngine engine({10, {}});
  const auto states = all_states(10);
  std::mt19937 rng(987654);
  std::uniform_int_distribution<std::size_t> pick(0, states.size() - 1);
  std::uniform_int_distribution<int> kind_pick(0, 2);
  const OperatorKind kinds[] = {OperatorKind::Py, OperatorKind::P2, OperatorKind::PyP2};

  int found = 0;
  while (found < 50) {
    const QuantumNumbers a = states[pick(rng)];
    const QuantumNumbers b = states[pick(rng)];
    const OperatorKind kind = kinds[kind_pick(rng)];
    if (!selection_allowed(a, b, kind)) continue;
    const auto v = engine.verify_against_direct(a, b, kind);
    if (std::max(std::abs(v.reduction), std::abs(v.direct)) < 1e-12) continue;
    INFO(a.str() << " | " << b.str() << " kind " << operator_kind_name(kind));
    CHECK(v.relative_gap < 1e-8);
    ++found;
  }
}

TEST_CASE("selection rules produce exact zeros without touching quadrature") {
  ElementEngine engine;
  const auto states = all_states(5);
  for (const auto& a : states) {
    for (const auto& b : states) {
      for (const auto kind : kAllKinds) {
        if (selection_allowed(a, b, kind)) continue;
        INFO(a.str() << " | " << b.str() << " kind " << operator_kind_name(kind));
        REQUIRE(engine.element(a, b, kind) == Complex(0.0));
      }
    }
  }
  // forbidden entries are never stored
  const auto size_after_forbidden = engine.table_size();
  CHECK(size_after_forbidden == 0);
}

TEST_CASE("hermiticity holds at the raw kernel level, not just by reconstruction") {
  // The engine stores hermitian kinds canonically and conjugates on lookup,
  // so <b|O|a> from the engine cannot disagree with <a|O|b> by construction.
  // Here both orientations are computed independently from kernels.
  RuleCache rules;
  const Complex i_unit{0.0, 1.0};
  const std::vector<std::pair<QuantumNumbers, QuantumNumbers>> pairs = {
      {{2, 1, 1}, {3, 2, 2}}, {{1, 0, 0}, {4, 1, 1}},  {{5, 3, -2}, {4, 2, -1}},
      {{3, 1, 0}, {3, 2, 0}}, {{6, 4, 3}, {7, 5, 4}},  {{2, 1, -1}, {5, 2, -2}},
  };

  for (const auto& [a, b] : pairs) {
    INFO(a.str() << " | " << b.str());

    for (const Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
      const Complex ab = sandwich_integral(a, b, position_kernel(axis), rules);
      const Complex ba = sandwich_integral(b, a, position_kernel(axis), rules);
      CHECK(std::abs(ab - std::conj(ba)) <= 1e-12 * std::max(1.0, std::abs(ab)));
    }
    {
      const Complex ab = sandwich_integral(a, b, momentum_kernel(Axis::Y), rules);
      const Complex ba = sandwich_integral(b, a, momentum_kernel(Axis::Y), rules);
      CHECK(std::abs(ab - std::conj(ba)) <= 1e-12 * std::max(1.0, std::abs(ab)));
    }
    {
      // sym{1/r, p_y} assembled one-sided: 2 <(1/r)p_y> + i <y/r^3>. Its
      // hermiticity across orientations is numerically equivalent to the
      // commutator identity [p_y, 1/r] = i y/r^3, so this pins the
      // (1/r)p_y kernel against the independent y/r^3 quadrature.
      const OperatorKernel inv_r_p = multiply_radial_power(momentum_kernel(Axis::Y), -1);
      const auto sym = [&](QuantumNumbers u, QuantumNumbers v) {
        return 2.0 * sandwich_integral(u, v, inv_r_p, rules) +
               i_unit * sandwich_integral(u, v, pos_over_r3_kernel(Axis::Y), rules);
      };
      const Complex ab = sym(a, b);
      const Complex ba = sym(b, a);
      CHECK(std::abs(ab - std::conj(ba)) <= 1e-12 * std::max(1.0, std::abs(ab)));
    }
  }
  // 1/r across different principal numbers (the p2 off-diagonal piece)
  const Complex invr_ab = sandwich_integral({3, 2, 1}, {5, 2, 1}, inv_r_kernel(), rules);
  const Complex invr_ba = sandwich_integral({5, 2, 1}, {3, 2, 1}, inv_r_kernel(), rules);
  CHECK(std::abs(invr_ab - std::conj(invr_ba)) <= 1e-13);
}

TEST_CASE("selection-rule zeros are physically real, not just short-circuited") {
  // raw quadrature on pairs the engine refuses: the integrals themselves
  // must vanish to roundoff, proving the allowed() table never hides a
  // nonzero element
  RuleCache rules;
  const struct {
    QuantumNumbers a, b;
    OperatorKernel kernel;
    const char* what;
  } cases[] = {
      // dl-forbidden, phi-allowed: the angular quadrature itself must vanish
      {{4, 2, 0}, {4, 0, 0}, position_kernel(Axis::Z), "z with dl = 2"},
      {{5, 3, 1}, {5, 1, 1}, position_kernel(Axis::Z), "z with dl = 2"},
      {{3, 2, 0}, {3, 0, 0}, inv_r_kernel(), "1/r with dl = 2"},
      {{5, 3, 2}, {5, 1, 1}, multiply_radial_power(momentum_kernel(Axis::Y), -1),
       "(1/r)p_y with dl = 2"},
      {{4, 3, 2}, {4, 1, 1}, momentum_kernel(Axis::Y), "p_y with dl = 2"},
      {{4, 2, 2}, {4, 1, 0}, multiply_position(momentum_kernel(Axis::Y), Axis::X),
       "x p_y with dl = 1"},
      {{6, 3, 0}, {6, 0, 0}, pos_over_r3_kernel(Axis::Z), "z/r^3 with dl = 3"},
  };
  for (const auto& c : cases) {
    INFO(c.what << ": " << c.a.str() << " | " << c.b.str());
    CHECK(std::abs(sandwich_integral(c.a, c.b, c.kernel, rules)) < 1e-13);
  }
  // and a phi-rule case, which must be an exact (not approximate) zero
  CHECK(sandwich_integral({3, 2, 1}, {3, 2, 1}, position_kernel(Axis::X), rules) ==
        Complex(0.0));
}

TEST_CASE("hermiticity within 1e-12 for the hermitian kinds") {
  ElementEngine engine;
  const auto states = all_states(5);
  std::mt19937 rng(1234);
  std::uniform_int_distribution<std::size_t> pick(0, states.size() - 1);
  for (int trial = 0; trial < 400; ++trial) {
    const QuantumNumbers a = states[pick(rng)];
    const QuantumNumbers b = states[pick(rng)];
    for (const auto kind : kHermitianKinds) {
      const Complex ab = engine.element(a, b, kind);
      const Complex ba = engine.element(b, a, kind);
      INFO(a.str() << " | " << b.str() << " kind " << operator_kind_name(kind));
      CHECK(std::abs(ab - std::conj(ba)) <
            1e-12 * std::max(1.0, std::abs(ab)));
    }
  }
}

TEST_CASE("x- and z-axis gradient kernels match the commutator route") {
  // the y-axis pair is covered by verify_against_direct; the x and z
  // analogues feed the component diagnostics and deserve their own check
  ElementEngine engine;
  const struct {
    QuantumNumbers a, b;
    Axis axis;
  } cases[] = {
      {{2, 1, 1}, {3, 2, 2}, Axis::X},  {{1, 0, 0}, {4, 1, -1}, Axis::X},
      {{5, 3, 0}, {4, 2, 1}, Axis::X},  {{2, 1, 0}, {3, 0, 0}, Axis::Z},
      {{4, 2, 1}, {3, 1, 1}, Axis::Z},  {{6, 5, -4}, {7, 4, -4}, Axis::Z},
  };
  for (const auto& c : cases) {
    const Complex reduction = engine.momentum(c.a, c.b, c.axis);
    const Complex direct = engine.momentum_direct(c.a, c.b, c.axis);
    INFO(c.a.str() << " | " << c.b.str() << " axis " << axis_name(c.axis));
    REQUIRE(std::abs(reduction) > 1e-6);
    CHECK(std::abs(reduction - direct) < 1e-9 * std::abs(reduction));
  }
}

TEST_CASE("<x p_y> diagonal is m/2 (the L_z half)") {
  ElementEngine engine;
  for (const auto qn : {QuantumNumbers{2, 1, 1}, {3, 2, -2}, {5, 4, 3}, {4, 2, 0}}) {
    const Complex v = engine.element(qn, qn, OperatorKind::XPy);
    CHECK(v.real() == Approx(qn.m / 2.0).margin(1e-12));
    CHECK(std::abs(v.imag()) < 1e-13);
  }
}

TEST_CASE("recurrences stay healthy at the hard n cap") {
  ElementEngine engine({hard_n_cap, {}});
  const QuantumNumbers top{30, 29, 29};
  CHECK(engine.element(top, top, OperatorKind::InvR).real() ==
        Approx(1.0 / 900.0).epsilon(1e-11));
  const auto v = engine.verify_against_direct({29, 28, 28}, top, OperatorKind::PyP2);
  CHECK(v.relative_gap < 1e-8);
}

TEST_CASE("states beyond the configured cap are rejected") {
  ElementEngine engine({4, {}});
  CHECK_THROWS_AS(engine.element({5, 0, 0}, {4, 1, 0}, OperatorKind::Z), std::invalid_argument);
  CHECK_THROWS_AS(engine.element({4, 1, 0}, {5, 0, 0}, OperatorKind::Z), std::invalid_argument);
}

TEST_CASE("concurrent evaluation reproduces serial results bitwise") {
  const auto states = all_states(6);
  std::vector<std::pair<QuantumNumbers, QuantumNumbers>> pairs;
  for (const auto& a : states)
    for (const auto& b : states)
      if (std::abs(a.l - b.l) == 1 && std::abs(a.m - b.m) == 1) pairs.emplace_back(a, b);

  ElementEngine serial;
  std::vector<Complex> expected(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    expected[i] = serial.element(pairs[i].first, pairs[i].second, OperatorKind::PyP2);
  }

  ElementEngine shared;
  std::vector<Complex> got(pairs.size());
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&, w] {
      // stride the pair list so the workers race on overlapping sub-elements
      for (std::size_t i = w; i < pairs.size(); i += 4) {
        got[i] = shared.element(pairs[i].first, pairs[i].second, OperatorKind::PyP2);
      }
    });
  }
  for (auto& t : workers) t.join();

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    INFO(pairs[i].first.str() << " | " << pairs[i].second.str());
    CHECK(std::memcmp(&got[i], &expected[i], sizeof(Complex)) == 0);
  }
}

TEST_CASE("element table dump carries every memoized entry") {
  ElementEngine engine;
  engine.element({1, 0, 0}, {2, 1, 1}, OperatorKind::Y);
  engine.element({1, 0, 0}, {1, 0, 0}, OperatorKind::P2);
  std::ostringstream os;
  engine.dump_csv(os);
  const std::string dump = os.str();
  CHECK(dump.find("bra_n,bra_l,bra_m,ket_n,ket_l,ket_m,kind,re,im") == 0);
  CHECK(dump.find(",y,") != std::string::npos);
  CHECK(dump.find(",p2,") != std::string::npos);
  CHECK(dump.find(",inv_r,") != std::string::npos);  // p2 reduction memoizes its 1/r piece
}

TEST_CASE("expectation over a superposition uses conjugated bra coefficients") {
  ElementEngine engine;
  Superposition s = Superposition::eigenstate({2, 1, 1});
  s.add({3, 2, 2}, Complex(0.0, 0.01));
  const Complex y = engine.expectation(s, OperatorKind::Y);
  // 2 Re[conj(1) * i*0.01 * <211|y|322>]; the y element is purely imaginary
  const Complex elem = engine.element({2, 1, 1}, {3, 2, 2}, OperatorKind::Y);
  CHECK(std::abs(y - 2.0 * (std::conj(Complex(1.0)) * Complex(0.0, 0.01) * elem).real()) <
        1e-15);
}
