// Copyright 2026 The mpal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpal/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SparseLU>

#include "mpal/errors.hpp"
#include "mpal/kernels.hpp"

namespace mpal {

SpectralData diagonalize(const AssembledOperator& op, bool verify) {
  const Eigen::MatrixXd h = op.to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw SolverError("symmetric eigensolver did not converge");
  SpectralData out{op.box(), es.eigenvalues(), es.eigenvectors()};
  if (!verify) return out;

  const Eigen::MatrixXd residual = h * out.eigenvectors - out.eigenvectors * out.eigenvalues.asDiagonal();
  for (Eigen::Index i = 0; i < residual.cols(); ++i) {
    const double r = residual.col(i).lpNorm<Eigen::Infinity>();
    if (r > 1e-9 * (1.0 + std::fabs(out.eigenvalues[i]))) {
      std::ostringstream os;
      os << "eigenpair " << i << " residual " << r << " exceeds tolerance";
      throw SolverError(os.str());
    }
  }
  const Eigen::MatrixXd gram = out.eigenvectors.transpose() * out.eigenvectors;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    if (std::fabs(gram(i, i) - 1.0) > 1e-12) throw SolverError("eigenvector normalisation drifted");
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::fabs(gram(i, j)) > 1e-10) throw SolverError("eigenvectors lost orthogonality");
    }
  }
  return out;
}

Eigen::VectorXd eigenvalues_only(const AssembledOperator& op) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.to_dense(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("symmetric eigensolver did not converge");
  return es.eigenvalues();
}

double resolvent_floor(std::span<const double> eigenvalues) {
  double top = 0.0;
  for (double l : eigenvalues) top = std::max(top, std::fabs(l));
  return kResolventFloor * (1.0 + top);
}

bool numerically_resonant(std::span<const double> eigenvalues, double e) {
  return kernels::min_abs_diff(eigenvalues, e) < resolvent_floor(eigenvalues);
}

void ResonanceParams::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw Error("beta must lie in (0, 1)");
}

std::vector<double> EnergyGrid::energies() const {
  std::vector<double> out;
  if (empty()) return out;
  if (points == 1 || lo == hi) {
    out.push_back(0.5 * (lo + hi));
    return out;
  }
  out.reserve(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) out.push_back(lo + (hi - lo) * k / (points - 1));
  return out;
}

std::string EnergyGrid::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (empty()) return "empty";
  os << "uniform:" << points << ":[" << lo << "," << hi << "]";
  return os.str();
}

Eigen::VectorXd green_row(const AssembledOperator& op, double e, const Config& x,
                          std::span<const double> eigenvalues) {
  const std::size_t ix = op.sites().index_of(x);
  if (ix >= op.size()) throw DimensionError("green: site " + to_string(x) + " lies outside the box");

  Eigen::VectorXd spectrum;
  if (eigenvalues.empty()) {
    spectrum = eigenvalues_only(op);
    eigenvalues = {spectrum.data(), static_cast<std::size_t>(spectrum.size())};
  }
  if (numerically_resonant(eigenvalues, e)) {
    std::ostringstream os;
    os.precision(17);
    os << "energy " << e << " lies within the resolvent floor of the spectrum";
    throw ResonantEnergyError(os.str());
  }

  const auto m = static_cast<Eigen::Index>(op.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs[static_cast<Eigen::Index>(ix)] = 1.0;
  if (op.is_dense()) {
    Eigen::MatrixXd a = op.dense();
    a.diagonal().array() -= e;
    return a.partialPivLu().solve(rhs);
  }
  Eigen::SparseMatrix<double> a = op.sparse();
  for (Eigen::Index i = 0; i < m; ++i) a.coeffRef(i, i) -= e;
  a.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw SolverError("sparse LU factorisation failed: " + lu.lastErrorMessage());
  Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw SolverError("sparse LU solve failed");
  return sol;
}

double green(const AssembledOperator& op, double e, const Config& x, const Config& y,
             std::span<const double> eigenvalues) {
  const std::size_t iy = op.sites().index_of(y);
  if (iy >= op.size()) throw DimensionError("green: site " + to_string(y) + " lies outside the box");
  return green_row(op, e, x, eigenvalues)[static_cast<Eigen::Index>(iy)];
}

double green_from_spectrum(const SpectralData& spec, double e, const Config& x, const Config& y) {
  const SiteIndex index(spec.box);
  const auto ix = static_cast<Eigen::Index>(index.index_of(x));
  const auto iy = static_cast<Eigen::Index>(index.index_of(y));
  if (ix >= spec.eigenvectors.rows() || iy >= spec.eigenvectors.rows()) {
    throw DimensionError("green_from_spectrum: site outside the box");
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
    s += spec.eigenvectors(ix, i) * spec.eigenvectors(iy, i) / (spec.eigenvalues[i] - e);
  }
  return s;
}

NSResult is_ENS(const AssembledOperator& op, const SpectralData& spec, double e, double m) {
  NSResult r;
  r.threshold = std::exp(-m * op.box().side);
  Eigen::VectorXd row;
  try {
    row = green_row(op, e, op.box().center, spec.values());
  } catch (const ResonantEnergyError&) {
    r.resonant = true;
    r.gf_max = std::numeric_limits<double>::infinity();
    return r;
  }
  const SiteIndex& index = op.sites();
  std::vector<int> flat(op.box().center.coords().size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    index.coords_at(i, flat);
    const Config y(op.box().n(), op.box().dim(), flat);
    if (!on_boundary(op.box(), y)) continue;
    const double g = std::fabs(row[static_cast<Eigen::Index>(i)]);
    if (!r.witness || g > r.gf_max) {
      r.gf_max = g;
      r.witness = y;
    }
  }
  r.non_singular = r.gf_max <= r.threshold;
  return r;
}

double resonance_radius(int side, double beta) { return std::exp(-std::pow(static_cast<double>(side), beta)); }

bool is_ER(std::span<const double> eigenvalues, double e, int side, double beta) {
  return kernels::min_abs_diff(eigenvalues, e) < resonance_radius(side, beta);
}

int cnr_sub_side(int side, double alpha) {
  return static_cast<int>(std::lround(std::pow(static_cast<double>(side), 1.0 / alpha)));
}

std::vector<Config> sub_box_centres(const BoxSpec& box, int sub_side, int stride) {
  if (stride < 1) throw Error("stride must be positive");
  const int reach = box.half() - sub_side / 2;
  std::vector<Config> out;
  if (reach < 0) return out;
  const auto& c = box.center.coords();
  const std::size_t k = c.size();
  std::vector<int> offset(k, -reach);
  for (;;) {
    std::vector<int> flat(k);
    for (std::size_t i = 0; i < k; ++i) flat[i] = c[i] + offset[i];
    out.emplace_back(box.n(), box.dim(), std::move(flat));
    std::size_t i = k;
    while (i-- > 0) {
      offset[i] += stride;
      if (offset[i] <= reach) break;
      offset[i] = -reach;
      if (i == 0) return out;
    }
  }
}

CNRResult is_ECNR(const BoxSpec& box, const ModelParams& params, const Potential& potential, double e,
                  double beta, double alpha, int stride) {
  CNRResult r;
  r.sub_side = cnr_sub_side(box.side, alpha);
  r.stride = stride;
  const auto op = assemble(box, params, potential);
  const Eigen::VectorXd ev = eigenvalues_only(op);
  r.box_resonant = is_ER({ev.data(), static_cast<std::size_t>(ev.size())}, e, box.side, beta);
  if (r.box_resonant) return r;
  if (r.sub_side >= box.side) {
    r.degenerate = true;
    r.cnr = true;
    return r;
  }
  for (const auto& c : sub_box_centres(box, r.sub_side, stride)) {
    const BoxSpec sub(c, r.sub_side);
    const Eigen::VectorXd sv = eigenvalues_only(assemble(sub, params, potential));
    ++r.sub_boxes_checked;
    if (is_ER({sv.data(), static_cast<std::size_t>(sv.size())}, e, r.sub_side, beta)) {
      r.offending = sub;
      return r;
    }
  }
  r.cnr = true;
  return r;
}

SingularityScanner::SingularityScanner(const AssembledOperator& op, const SpectralData& spec) : box_(op.box()) {
  init(spec);
}

SingularityScanner::SingularityScanner(const BoxSpec& box, const ModelParams& params, const Potential& potential)
    : box_(box) {
  init(diagonalize(assemble(box, params, potential), false));
}

void SingularityScanner::init(const SpectralData& spec) {
  const SiteIndex index(box_);
  const std::size_t m = index.size();
  lambda_.assign(spec.eigenvalues.data(), spec.eigenvalues.data() + m);
  const auto ic = static_cast<Eigen::Index>(index.index_of(box_.center));
  centre_row_.resize(m);
  for (std::size_t i = 0; i < m; ++i) centre_row_[i] = spec.eigenvectors(ic, static_cast<Eigen::Index>(i));
  std::vector<int> flat(box_.center.coords().size());
  for (std::size_t s = 0; s < m; ++s) {
    index.coords_at(s, flat);
    bool edge = false;
    for (std::size_t k = 0; k < flat.size(); ++k) {
      edge = edge || std::abs(flat[k] - box_.center.coords()[k]) == box_.half();
    }
    if (!edge) continue;
    for (std::size_t i = 0; i < m; ++i) {
      boundary_rows_.push_back(spec.eigenvectors(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)));
    }
    ++n_boundary_;
  }
  floor_ = resolvent_floor(lambda_);
  weights_.resize(m);
}

double SingularityScanner::boundary_max(double e) const {
  const auto& k = kernels::active();
  if (k.min_abs_diff(lambda_.data(), lambda_.size(), e) < floor_) return std::numeric_limits<double>::infinity();
  k.resolvent_weights(centre_row_.data(), lambda_.data(), lambda_.size(), e, weights_.data());
  return k.max_abs_rowdot(boundary_rows_.data(), n_boundary_, lambda_.size(), weights_.data());
}

bool SingularityScanner::singular(double e, double m) const {
  const double g = boundary_max(e);
  if (std::isinf(g)) return true;
  return g > std::exp(-m * box_.side);
}

TunnelingResult is_mT(const BoxSpec& box, const ModelParams& params, const Potential& potential,
                      const EnergyGrid& grid, double m, int sub_side, int stride) {
  if (sub_side >= box.side) throw Error("tunnelling sub-box side must be smaller than the box side");
  TunnelingResult r;
  r.grid_meta = grid.describe();
  r.stride = stride;
  if (grid.empty()) return r;
  std::vector<SingularityScanner> scanners;
  for (const auto& c : sub_box_centres(box, sub_side, stride)) {
    scanners.emplace_back(BoxSpec(c, sub_side), params, potential);
  }
  const int gap = 2 * (sub_side / 2);
  std::vector<std::size_t> bad;
  for (double e : grid.energies()) {
    bad.clear();
    for (std::size_t i = 0; i < scanners.size(); ++i) {
      if (scanners[i].singular(e, m)) bad.push_back(i);
    }
    for (std::size_t a = 0; a < bad.size(); ++a) {
      for (std::size_t b = a + 1; b < bad.size(); ++b) {
        const auto& ba = scanners[bad[a]].box();
        const auto& bb = scanners[bad[b]].box();
        if (sup_norm(ba.center, bb.center) > gap) {
          r.tunneling = true;
          r.energy = e;
          r.pair = std::make_pair(ba, bb);
          return r;
        }
      }
    }
  }
  return r;
}

BoxSpec join_boxes(const BoxSpec& first, const BoxSpec& second) {
  if (first.side != second.side || first.dim() != second.dim()) {
    throw DimensionError("factor boxes must share side and lattice dimension");
  }
  std::vector<int> flat = first.center.coords();
  flat.insert(flat.end(), second.center.coords().begin(), second.center.coords().end());
  return BoxSpec(Config(first.n() + second.n(), first.dim(), std::move(flat)), first.side);
}

void require_pi_factorisation(const BoxSpec& first, const BoxSpec& second, const ModelParams& params) {
  if (first.n() + second.n() != params.n_particles) {
    throw DimensionError("factor boxes must partition the particles of the model");
  }
  if (params.adjacency != Adjacency::l1) {
    throw NotPIError("sup-norm hopping moves several particles at once and does not split into a tensor sum; "
                     "use adjacency = l1");
  }
  const int reach = 2 * first.half() + params.interaction.r0;
  for (int i = 0; i < first.n(); ++i) {
    for (int j = 0; j < second.n(); ++j) {
      if (sup_norm(first.center.particle(i), second.center.particle(j)) <= reach) {
        throw NotPIError("factor boxes interact: particles " + std::to_string(i) + " and " +
                         std::to_string(first.n() + j) + " can come within the interaction range");
      }
    }
  }
}

std::vector<double> pi_tensor_spectrum(const BoxSpec& first, const BoxSpec& second, const ModelParams& params,
                                       const Potential& potential) {
  (void)join_boxes(first, second);
  require_pi_factorisation(first, second, params);
  const Eigen::VectorXd a = eigenvalues_only(assemble(first, params.with_particles(first.n()), potential));
  const Eigen::VectorXd b = eigenvalues_only(assemble(second, params.with_particles(second.n()), potential));
  std::vector<double> sums;
  sums.reserve(static_cast<std::size_t>(a.size() * b.size()));
  for (double x : a) {
    for (double y : b) sums.push_back(x + y);
  }
  std::sort(sums.begin(), sums.end());
  return sums;
}

ExpansionResult gf_eigen_expansion(const AssembledOperator& first_op, const AssembledOperator& second_op,
                                   const SpectralData& first, const SpectralData& second, double e,
                                   const Config& u, const Config& v, ExpansionForm form) {
  const int n1 = first_op.box().n();
  const int n2 = second_op.box().n();
  if (u.n() != n1 + n2 || v.n() != n1 + n2) throw DimensionError("configurations must cover both factors");
  std::vector<int> p1(static_cast<std::size_t>(n1)), p2(static_cast<std::size_t>(n2));
  for (int j = 0; j < n1; ++j) p1[static_cast<std::size_t>(j)] = j;
  for (int j = 0; j < n2; ++j) p2[static_cast<std::size_t>(j)] = n1 + j;
  const Config u1 = u.select(p1), v1 = v.select(p1), u2 = u.select(p2), v2 = v.select(p2);

  // Resonance with the tensor-sum spectrum: min_{a,b} |lambda_a - (E - mu_b)|.
  std::vector<double> shifted(static_cast<std::size_t>(second.eigenvalues.size()));
  for (std::size_t b = 0; b < shifted.size(); ++b) shifted[b] = e - second.eigenvalues[static_cast<Eigen::Index>(b)];
  const double gap = kernels::min_pair_gap(first.values(), shifted);
  const double top = std::fabs(first.eigenvalues.cwiseAbs().maxCoeff()) + second.eigenvalues.cwiseAbs().maxCoeff();
  if (gap < kResolventFloor * (1.0 + top)) throw ResonantEnergyError("energy resonant with the tensor-sum spectrum");

  if (form == ExpansionForm::automatic) {
    form = sup_norm(u2, v2) > sup_norm(u1, v1) ? ExpansionForm::over_second : ExpansionForm::over_first;
  }
  const bool over_first = form == ExpansionForm::over_first;
  const SpectralData& outer = over_first ? first : second;
  const AssembledOperator& inner_op = over_first ? second_op : first_op;
  const SpectralData& inner = over_first ? second : first;
  const Config& uo = over_first ? u1 : u2;
  const Config& vo = over_first ? v1 : v2;
  const Config& ui = over_first ? u2 : u1;
  const Config& vi = over_first ? v2 : v1;

  const SiteIndex outer_index(outer.box);
  const auto iu = static_cast<Eigen::Index>(outer_index.index_of(uo));
  const auto iv = static_cast<Eigen::Index>(outer_index.index_of(vo));
  if (iu >= outer.eigenvectors.rows() || iv >= outer.eigenvectors.rows()) {
    throw DimensionError("gf_eigen_expansion: configuration outside the factor box");
  }

  ExpansionResult r;
  r.form = form;
  double gmax = 0.0;
  for (Eigen::Index a = 0; a < outer.eigenvalues.size(); ++a) {
    const double g = green(inner_op, e - outer.eigenvalues[a], ui, vi, inner.values());
    gmax = std::max(gmax, std::fabs(g));
    r.value += outer.eigenvectors(iu, a) * outer.eigenvectors(iv, a) * g;
  }
  r.bound = static_cast<double>(outer_index.size()) * gmax;
  return r;
}

double pi_reduced_mass(double m, int side, int n_particles, int dim, double beta) {
  const double l = static_cast<double>(side);
  return m * (1.0 - std::pow(l, -(1.0 - beta)) - n_particles * (dim - 1) * std::log(l) / l);
}

PIBoundCheck check_pi_decay_bound(const BoxSpec& first, const BoxSpec& second, const ModelParams& params,
                                  const Potential& potential, double e, double m, int sub_side,
                                  const EnergyGrid& grid, double alpha, double beta, int stride) {
  PIBoundCheck r;
  const BoxSpec full = join_boxes(first, second);
  require_pi_factorisation(first, second, params);
  r.reduced_mass = pi_reduced_mass(m, full.side, full.n(), full.dim(), beta);
  const bool cnr = is_ECNR(full, params, potential, e, beta, alpha).cnr;
  const bool t1 = is_mT(first, params.with_particles(first.n()), potential, grid, m, sub_side, stride).tunneling;
  const bool t2 = is_mT(second, params.with_particles(second.n()), potential, grid, m, sub_side, stride).tunneling;
  r.hypotheses_met = cnr && !t1 && !t2;
  if (!r.hypotheses_met) return r;
  const auto op = assemble(full, params, potential);
  const auto spec = diagonalize(op, false);
  const NSResult ns = is_ENS(op, spec, e, r.reduced_mass);
  r.gf_max = ns.gf_max;
  r.bound_holds = ns.non_singular;
  return r;
}

ClassificationReport classify(const BoxSpec& box, const ModelParams& params, const Potential& potential, double e,
                              double m, const ClassificationOptions& options) {
  ClassificationReport r;
  r.box = box;
  r.energy = e;
  r.mass = m;
  const auto op = assemble(box, params, potential);
  const auto spec = diagonalize(op);
  r.ns = is_ENS(op, spec, e, m);
  r.ens = r.ns.non_singular;
  const auto values = spec.values();
  r.nearest_eigenvalue = values[0];
  for (double l : values) {
    if (std::fabs(l - e) < std::fabs(r.nearest_eigenvalue - e)) r.nearest_eigenvalue = l;
  }
  r.er = is_ER(values, e, box.side, options.beta);
  r.cnr = is_ECNR(box, params, potential, e, options.beta, options.alpha, options.cnr_stride);
  r.ecnr = r.cnr.cnr;
  r.fi = is_fully_interactive(box, params.interaction.r0);
  if (options.tunneling_side) {
    r.tunneling = is_mT(box, params, potential, options.grid, m, *options.tunneling_side, options.tunneling_stride);
    r.mt = r.tunneling->tunneling;
    r.grid_meta = r.tunneling->grid_meta;
  } else {
    r.grid_meta = "exact";
  }
  return r;
}

}  // namespace mpal
