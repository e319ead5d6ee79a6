#include "energies.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "convex.hpp"
#include "rng.hpp"

namespace polyhom {

namespace {

std::string describe_set(const MatrixSet& a) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) os << ",";
    if (!a.labels.empty())
      os << a.labels[i];
    else
      os << "#" << i;
  }
  os << "}";
  return os.str();
}

std::vector<std::vector<double>> entry_vectors(const MatrixSet& a) {
  std::vector<std::vector<double>> v;
  v.reserve(a.size());
  for (const Mat2& g : a.elems) v.push_back({g.a11, g.a12, g.a21, g.a22});
  return v;
}

std::vector<std::vector<double>> minors_vectors(const MatrixSet& a) {
  std::vector<std::vector<double>> v;
  v.reserve(a.size());
  for (const Mat2& g : a.elems) {
    const MinorsVec mv = minors(g);
    v.push_back({mv[0], mv[1], mv[2], mv[3], mv[4]});
  }
  return v;
}

// d^p = (d^2)^(p/2) etc., with fast paths for the common exponents.
double pow_from_sq(double dsq, double exponent_on_d) {
  if (exponent_on_d == 2.0) return dsq;
  if (exponent_on_d == 4.0) return dsq * dsq;
  if (exponent_on_d == 1.0) return std::sqrt(dsq);
  return std::pow(dsq, 0.5 * exponent_on_d);
}

// Pull a minors-space direction back through the derivative of m -> minors(m).
Mat2 minors_pullback(const Mat2& m, const double g[5]) {
  return {g[0] + g[4] * m.a22, g[1] - g[4] * m.a21, g[2] - g[4] * m.a12,
          g[3] + g[4] * m.a11};
}

class ZeroSetEnergy final : public EnergyDensity {
 public:
  ZeroSetEnergy(const MatrixSet& a, double p)
      : a_(a), p_(p), proj4_(entry_vectors(a)), proj5_(minors_vectors(a)) {
    validate(a_);
    if (!(p >= 2.0))
      throw std::invalid_argument("build_zero_set_energy: p must be >= 2");
    label_ = "zero-set energy (p=" + std::to_string(p) + ") on " + describe_set(a_);
  }

  double value(const Mat2& m) const override {
    Mat2 g;
    return eval(m, nullptr, g);
  }

  Mat2 gradient(const Mat2& m) const override {
    Mat2 g;
    eval(m, &g, g);
    return g;
  }

  double value_and_gradient(const Mat2& m, Mat2& grad_out) const override {
    return eval(m, &grad_out, grad_out);
  }

  double growth_p() const override { return p_; }
  const MatrixSet& generators() const override { return a_; }
  const std::string& label() const override { return label_; }

 private:
  double eval(const Mat2& m, Mat2* want_grad, Mat2& grad) const {
    const double pt4[4] = {m.a11, m.a12, m.a21, m.a22};
    double q4[4];
    const double d4sq = proj4_.project_sq(pt4, q4);
    const MinorsVec mv = minors(m);
    double q5[5];
    const double d5sq = proj5_.project_sq(mv.data(), q5);

    const double w1 = pow_from_sq(d4sq, p_);
    const double w2 = pow_from_sq(d5sq, 0.5 * p_);
    const bool branch1 = w1 >= w2;  // ties resolve to the entry-distance branch
    if (want_grad) {
      if (branch1) {
        // d/dm of (d4^2)^(p/2): p * d4^(p-2) * (m - proj).
        const double s = p_ * pow_from_sq(d4sq, p_ - 2.0);
        grad = s * Mat2{pt4[0] - q4[0], pt4[1] - q4[1], pt4[2] - q4[2],
                        pt4[3] - q4[3]};
      } else {
        // d/dm of (d5^2)^(p/4): (p/2) * d5^(p/2-2) * J^T (minors(m) - proj).
        const double s = 0.5 * p_ * pow_from_sq(d5sq, 0.5 * p_ - 2.0);
        const double diff[5] = {mv[0] - q5[0], mv[1] - q5[1], mv[2] - q5[2],
                                mv[3] - q5[3], mv[4] - q5[4]};
        grad = s * minors_pullback(m, diff);
      }
    }
    return branch1 ? w1 : w2;
  }

  MatrixSet a_;
  double p_;
  SimplexProjector proj4_;
  SimplexProjector proj5_;
  std::string label_;
};

class HullDistanceEnergy final : public EnergyDensity {
 public:
  HullDistanceEnergy(const MatrixSet& a, double p)
      : a_(a), p_(p), proj4_(entry_vectors(a)) {
    validate(a_);
    if (!(p >= 2.0))
      throw std::invalid_argument("convex_hull_distance_energy: p must be >= 2");
    label_ = "hull-distance energy (p=" + std::to_string(p) + ") on " + describe_set(a_);
  }

  double value(const Mat2& m) const override {
    const double pt4[4] = {m.a11, m.a12, m.a21, m.a22};
    return pow_from_sq(proj4_.project_sq(pt4), p_);
  }

  Mat2 gradient(const Mat2& m) const override {
    Mat2 g;
    value_and_gradient(m, g);
    return g;
  }

  double value_and_gradient(const Mat2& m, Mat2& grad_out) const override {
    const double pt4[4] = {m.a11, m.a12, m.a21, m.a22};
    double q4[4];
    const double d4sq = proj4_.project_sq(pt4, q4);
    const double s = p_ * pow_from_sq(d4sq, p_ - 2.0);
    grad_out = s * Mat2{pt4[0] - q4[0], pt4[1] - q4[1], pt4[2] - q4[2],
                        pt4[3] - q4[3]};
    return pow_from_sq(d4sq, p_);
  }

  double growth_p() const override { return p_; }
  const MatrixSet& generators() const override { return a_; }
  const std::string& label() const override { return label_; }

 private:
  MatrixSet a_;
  double p_;
  SimplexProjector proj4_;
  std::string label_;
};

}  // namespace

std::shared_ptr<EnergyDensity> build_zero_set_energy(const MatrixSet& a, double p) {
  return std::make_shared<ZeroSetEnergy>(a, p);
}

std::shared_ptr<EnergyDensity> convex_hull_distance_energy(const MatrixSet& a,
                                                           double p) {
  return std::make_shared<HullDistanceEnergy>(a, p);
}

double sverak_V(const Mat2& m) {
  const Mat2 e = sym_part(m);
  const double d = det(e);
  if (e.a11 > 0.0 && d > 0.0) return d;
  return 0.0;
}

int PartitionSpec::phase_at(double y1, double y2) const {
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].contains(y1, y2)) return phase[i];
  throw std::invalid_argument("PartitionSpec: point not covered by any cell");
}

PartitionSpec vertical_halves() {
  PartitionSpec p;
  p.cells = {{0.0, 0.5, 0.0, 1.0}, {0.5, 1.0, 0.0, 1.0}};
  p.phase = {0, 1};
  p.n_phases = 2;
  return p;
}

double distance_integrand(double y1, double y2, const Mat2& m,
                          const PartitionSpec& partition,
                          const std::vector<MatrixSet>& sets) {
  if (!(y1 >= 0.0 && y1 < 1.0 && y2 >= 0.0 && y2 < 1.0))
    throw std::invalid_argument("distance_integrand: y must lie in [0,1)^2");
  const int ph = partition.phase_at(y1, y2);
  if (ph < 0 || static_cast<std::size_t>(ph) >= sets.size())
    throw std::invalid_argument("distance_integrand: phase has no set");
  return dist_to_set(m, sets[ph]);
}

double CellEnergy::value(double y1, double y2, const Mat2& m) const {
  return phase_energy(y1, y2).value(m);
}

Mat2 CellEnergy::gradient(double y1, double y2, const Mat2& m) const {
  return phase_energy(y1, y2).gradient(m);
}

double CellEnergy::value_and_gradient(double y1, double y2, const Mat2& m,
                                      Mat2& grad_out) const {
  return phase_energy(y1, y2).value_and_gradient(m, grad_out);
}

const EnergyDensity& CellEnergy::phase_energy(double y1, double y2) const {
  const int ph = partition.phase_at(y1, y2);
  if (ph < 0 || static_cast<std::size_t>(ph) >= phases.size())
    throw std::invalid_argument("CellEnergy: phase has no density");
  return *phases[ph];
}

CellEnergy composite_cell_energy(double p) {
  CellEnergy ce;
  ce.partition = vertical_halves();
  ce.phases = {build_zero_set_energy(counterexample::phase1_set(), p),
               build_zero_set_energy(counterexample::phase2_set(), p)};
  return ce;
}

CellEnergy composite_cell_energy_convex_phase2(double p) {
  CellEnergy ce;
  ce.partition = vertical_halves();
  ce.phases = {build_zero_set_energy(counterexample::phase1_set(), p),
               convex_hull_distance_energy(counterexample::phase2_set(), p)};
  return ce;
}

CoercivityBounds coercivity_check(const EnergyDensity& e, double radius,
                                  int grid_n) {
  if (!(radius > 0.0)) throw std::invalid_argument("coercivity_check: radius must be > 0");
  if (grid_n < 2) throw std::invalid_argument("coercivity_check: grid_n must be >= 2");
  const double p = e.growth_p();

  double r_set = 0.0;
  for (const Mat2& g : e.generators().elems)
    r_set = std::max(r_set, frobenius_norm(g));
  const double c2 = pow_from_sq(r_set * r_set, p);

  // Deterministic sample of the Frobenius ball.
  SplitMix64 rng(0x9e3779b97f4a7c15ull);
  const int count = grid_n * grid_n;
  std::vector<Mat2> pts;
  pts.reserve(count);
  while (static_cast<int>(pts.size()) < count) {
    double x[4];
    double nsq = 0.0;
    for (double& c : x) {
      c = rng.next_in(-1.0, 1.0);
      nsq += c * c;
    }
    if (nsq > 1.0) continue;
    pts.push_back({radius * x[0], radius * x[1], radius * x[2], radius * x[3]});
  }

  double c1 = 1.0;
  double c3 = 1.0;
  std::vector<double> values(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double w = e.value(pts[i]);
    values[i] = w;
    const double nsq = frobenius_norm(pts[i]);
    const double np = pow_from_sq(nsq * nsq, p);
    if (nsq > 1e-9) c1 = std::min(c1, (w + c2) / np);
    c3 = std::max(c3, w / (1.0 + np));
  }

  // Certify both inequalities at every sample.
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double nsq = frobenius_norm(pts[i]);
    const double np = pow_from_sq(nsq * nsq, p);
    const double slack = 1e-9 * (1.0 + np);
    if (c1 * np - c2 > values[i] + slack)
      throw std::logic_error("coercivity_check: lower bound violated");
    if (values[i] > c3 * (1.0 + np) + slack)
      throw std::logic_error("coercivity_check: upper bound violated");
  }
  return {c1, c2, c3};
}

}  // namespace polyhom
