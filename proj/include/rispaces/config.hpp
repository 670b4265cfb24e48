#pragma once

#include <cstdint>

namespace rispaces {

// Every numerical default in one place; the CLI exposes each as a flag.
struct Defaults {
  static constexpr double rel_tol = 1e-10;
  static constexpr int sup_count = 4096;
  static constexpr double u_max = 35.0;
  static constexpr int panels = 600;
  static constexpr int k_nodes = 200;
  static constexpr double ceiling = 64.0;
  static constexpr double drift_limit = 0.05;
  static constexpr std::uint64_t seed = 20160401;
};

// Resolution knobs shared by the harness and the CLI.  refined() doubles the
// number of intervals of every grid so coarse nodes stay nodes of the fine grid.
struct Resolution {
  double u_max = Defaults::u_max;
  int panels = Defaults::panels;
  int k_nodes = Defaults::k_nodes;
  int sup_count = Defaults::sup_count;
  double rel_tol = Defaults::rel_tol;

  Resolution refined() const {
    Resolution r = *this;
    r.panels = 2 * panels;
    r.k_nodes = 2 * (k_nodes - 1) + 1;
    r.sup_count = 2 * (sup_count - 1) + 1;
    return r;
  }
};

}  // namespace rispaces
