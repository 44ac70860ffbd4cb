#pragma once

#include <array>
#include <span>
#include <vector>

#include "packfem/types.hpp"

namespace packfem {

/// Shu-Osher form of SSP-RK3. Stage s computes
///   u_s = a_s * u_n + b_s * (u_{s-1} + dt * L(u_{s-1}))
struct Rk3Stage {
  Real a;
  Real b;
};
inline constexpr std::array<Rk3Stage, 3> kSspRk3 = {{{0.0, 1.0}, {0.75, 0.25}, {1.0 / 3.0, 2.0 / 3.0}}};

/// Combines one stage in place: cur <- a * un + b * (cur + dt * rate).
inline void rk3_combine(const Rk3Stage& s, Real dt, std::span<const Real> un, std::span<const Real> rate,
                        std::span<Real> cur) {
  for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = s.a * un[i] + s.b * (cur[i] + dt * rate[i]);
}

/// One SSP-RK3 step of du/dt = L(u). L(u, rate) writes the rate for u.
template <class Rate>
void rk3_step(std::span<Real> u, Real dt, Rate&& L) {
  const std::vector<Real> un(u.begin(), u.end());
  std::vector<Real> rate(u.size());
  for (const auto& s : kSspRk3) {
    L(std::span<const Real>(u), std::span<Real>(rate));
    rk3_combine(s, dt, un, rate, u);
  }
}

}  // namespace packfem
