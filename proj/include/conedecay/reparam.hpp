#pragma once

#include "conedecay/morse.hpp"
#include "conedecay/surfaces.hpp"

#include <functional>
#include <memory>
#include <string>

namespace conedecay {

enum class FamilyKind { Cone, Cylinder };

std::string to_string(FamilyKind k);

using PointMap = std::function<Vec(const Vec&)>;

struct CylinderEta {
  Vec eta_tilde;
  double rho = 0.0;
};

// Bundle (eta, T, F) with Q_m(T_t(x)) = (phi(x), 1) . eta(t) on cU.
struct ReparamFamily {
  std::string id;
  FamilyKind kind = FamilyKind::Cone;
  SurfaceChart chart;
  Box cU;
  bool closed_form = true;
  std::function<Vec(const Vec& t)> eta;
  // T_at(t) is x -> T_t(x); per-t set-up happens once.
  std::function<PointMap(const Vec& t)> T_at;
  std::function<double(const Vec& x, const Vec& t)> F;
  std::shared_ptr<const MorseChart> morse;

  const QuadraticSignature& sig() const { return chart.sig; }
  int n() const { return chart.sig.n; }
  int ambient_dim() const { return chart.sig.n + 2; }
  double c() const { return cU.half_widths()(0); }

  Vec T(const Vec& t, const Vec& x) const { return T_at(t)(x); }
  Vec eta_tilde(const Vec& t) const;
  double rho(const Vec& t) const;
  // Phi(x, h) for cones, Phi~(x, h) for cylinders.
  Vec lift(const Vec& x, double h) const;
};

Vec eta_parabola(double t);
Vec eta_perturbed(double t);
double T_perturbed(double t, double x);
CylinderEta eta_cylinder_parabola(double t);

Vec eta_general(const VectorMap& varphi, const QuadraticSignature& sig, const Vec& t);
double F_eval(const VectorMap& varphi, const QuadraticSignature& sig, const Vec& x, const Vec& t);
CylinderEta split_eta_for_cylinder(const Vec& eta);

// G(x, t) = F(x + t, t) as a Morse family in x.
FunctionFamily shifted_F_family(const VectorMap& varphi, const QuadraticSignature& sig);

struct BuildOptions {
  double c_start = 0.5;
  int max_shrinks = 12;
  int range_samples = 9;
  MorseOptions morse;
};

ReparamFamily build_T_general(const VectorMap& varphi, const QuadraticSignature& sig,
                              FamilyKind kind = FamilyKind::Cone, const BuildOptions& opts = {});

// "cone_parabola", "cone_perturbed", "cyl_parabola", "cone_general:<surface>",
// "cyl_general:<surface>".
ReparamFamily make_family(const std::string& id);

struct IdentityReport {
  double max_error = 0.0;      // |Q_m(T_t(x)) - lifted dot product|
  double min_eta_norm = 0.0;
  double max_F_diag = 0.0;     // |F(x, x)|
  double max_grad_diag = 0.0;  // |grad_t F(x, t)| at t = x
  double eps = 0.0;            // min(min |det H_t F_x|, 1 / max |det H_t F_x|)
  std::size_t samples = 0;
};

// Random samples of (x, t) in cU; cylinders also draw h from `heights`.
IdentityReport check_identity(const ReparamFamily& fam, std::size_t samples, unsigned long long seed,
                              const std::vector<double>& heights = {1.0});

}  // namespace conedecay
