#include "homsel/chain.hpp"

#include <algorithm>

namespace homsel {

namespace {

std::vector<Int> mat_vec(const IntMat& m, const std::vector<Int>& x) {
  if (static_cast<int>(x.size()) != m.cols()) throw error("mat_vec: dimension mismatch");
  std::vector<Int> y(m.rows(), Int(0));
  for (int i = 0; i < m.rows(); ++i) {
    Int acc = 0;
    for (int j = 0; j < m.cols(); ++j) {
      const Int& a = m.at(i, j);
      if (a != 0) acc += a * x[j];
    }
    y[i] = acc;
  }
  return y;
}

Int positive_mod(const Int& a, const Int& d) {
  Int r = a % d;
  if (r < 0) r += d;
  return r;
}

}  // namespace

ChainComplex::ChainComplex(std::vector<int> basis_counts, std::vector<IntMat> boundaries,
                           std::vector<std::vector<std::string>> labels)
    : basis_counts_(std::move(basis_counts)), labels_(std::move(labels)) {
  if (basis_counts_.empty()) throw error("ChainComplex: need at least degree 0");
  const int top = static_cast<int>(basis_counts_.size()) - 1;
  for (int n : basis_counts_) {
    if (n < 0) throw error("ChainComplex: negative basis count");
  }
  if (static_cast<int>(boundaries.size()) != top)
    throw error("ChainComplex: expected one boundary matrix per degree 1..top");
  boundary_.reserve(top + 2);
  boundary_.push_back(IntMat(0, basis_counts_[0]));
  for (int q = 1; q <= top; ++q) {
    IntMat& d = boundaries[q - 1];
    if (d.rows() != basis_counts_[q - 1] || d.cols() != basis_counts_[q])
      throw error("ChainComplex: boundary matrix shape mismatch in degree " + std::to_string(q));
    boundary_.push_back(std::move(d));
  }
  boundary_.push_back(IntMat(basis_counts_[top], 0));
  for (int q = 2; q <= top; ++q) {
    if (!multiply(boundary_[q - 1], boundary_[q]).is_zero())
      throw error("ChainComplex: d*d != 0 between degrees " + std::to_string(q) + " and " +
                  std::to_string(q - 2));
  }
  if (!labels_.empty()) {
    if (static_cast<int>(labels_.size()) != top + 1)
      throw error("ChainComplex: label list count mismatch");
    for (int q = 0; q <= top; ++q) {
      if (static_cast<int>(labels_[q].size()) != basis_counts_[q])
        throw error("ChainComplex: label count mismatch in degree " + std::to_string(q));
    }
  }
}

int ChainComplex::basis_count(int q) const {
  if (q < 0 || q > top_degree()) return 0;
  return basis_counts_[q];
}

const IntMat& ChainComplex::boundary(int q) const {
  if (q < 0 || q > top_degree() + 1) throw error("ChainComplex::boundary: degree out of range");
  return boundary_[q];
}

const std::vector<std::string>& ChainComplex::labels(int q) const {
  if (labels_.empty()) throw error("ChainComplex::labels: complex has no labels");
  if (q < 0 || q > top_degree()) throw error("ChainComplex::labels: degree out of range");
  return labels_[q];
}

Subcomplex::Subcomplex(const ChainComplex& parent, std::vector<std::vector<int>> selected)
    : parent_(&parent), selected_(std::move(selected)) {
  const int top = parent.top_degree();
  if (static_cast<int>(selected_.size()) != top + 1)
    throw error("Subcomplex: need a selection list per degree");
  mask_.resize(top + 1);
  for (int q = 0; q <= top; ++q) {
    mask_[q].assign(parent.basis_count(q), 0);
    int prev = -1;
    for (int idx : selected_[q]) {
      if (idx < 0 || idx >= parent.basis_count(q))
        throw error("Subcomplex: cell index out of range in degree " + std::to_string(q));
      if (idx <= prev) throw error("Subcomplex: selection must be sorted and unique");
      prev = idx;
      mask_[q][idx] = 1;
    }
  }
  for (int q = 1; q <= top; ++q) {
    const IntMat& d = parent.boundary(q);
    for (int j : selected_[q]) {
      for (int i = 0; i < d.rows(); ++i) {
        if (d.at(i, j) != 0 && !mask_[q - 1][i])
          throw error("Subcomplex: selection is not closed under the boundary");
      }
    }
  }
}

const std::vector<int>& Subcomplex::selected(int q) const {
  if (q < 0 || q > parent_->top_degree()) throw error("Subcomplex::selected: degree out of range");
  return selected_[q];
}

bool Subcomplex::contains(int q, int index) const {
  if (q < 0 || q > parent_->top_degree()) return false;
  if (index < 0 || index >= parent_->basis_count(q)) return false;
  return mask_[q][index] != 0;
}

QuotientComplex quotient_complex(const ChainComplex& c, const Subcomplex& a) {
  if (&a.parent() != &c) throw error("quotient_complex: subcomplex belongs to another complex");
  const int top = c.top_degree();
  QuotientComplex out{ChainComplex({0}, {}), {}, {}};
  out.old_to_new.resize(top + 1);
  out.new_to_old.resize(top + 1);
  std::vector<int> counts(top + 1, 0);
  for (int q = 0; q <= top; ++q) {
    out.old_to_new[q].assign(c.basis_count(q), -1);
    for (int i = 0; i < c.basis_count(q); ++i) {
      if (!a.contains(q, i)) {
        out.old_to_new[q][i] = static_cast<int>(out.new_to_old[q].size());
        out.new_to_old[q].push_back(i);
      }
    }
    counts[q] = static_cast<int>(out.new_to_old[q].size());
  }
  std::vector<IntMat> boundaries;
  boundaries.reserve(top);
  for (int q = 1; q <= top; ++q) {
    const IntMat& d = c.boundary(q);
    IntMat rd(counts[q - 1], counts[q]);
    for (int jn = 0; jn < counts[q]; ++jn) {
      const int j = out.new_to_old[q][jn];
      for (int in = 0; in < counts[q - 1]; ++in) {
        rd.at(in, jn) = d.at(out.new_to_old[q - 1][in], j);
      }
    }
    boundaries.push_back(std::move(rd));
  }
  std::vector<std::vector<std::string>> labels;
  if (c.has_labels()) {
    labels.resize(top + 1);
    for (int q = 0; q <= top; ++q) {
      for (int i : out.new_to_old[q]) labels[q].push_back(c.labels(q)[i]);
    }
  }
  out.complex = ChainComplex(counts, std::move(boundaries), std::move(labels));
  return out;
}

HomologyPresentation::HomologyPresentation(const ChainComplex& c, int q) : q_(q) {
  if (q < 0 || q > c.top_degree())
    throw error("HomologyPresentation: degree out of range");
  n_ = c.basis_count(q);
  const IntMat& a = c.boundary(q);
  const IntMat& b = c.boundary(q + 1);
  SmithResult snf_a = smith_normal_form(a);
  rank_a_ = snf_a.rank;
  kernel_dim_ = n_ - rank_a_;
  vinv_a_ = snf_a.v_inv;
  kernel_basis_ = IntMat(n_, kernel_dim_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < kernel_dim_; ++j) kernel_basis_.at(i, j) = snf_a.v.at(i, rank_a_ + j);
  }
  // Express the image of the next boundary in kernel coordinates.
  IntMat in_kernel = multiply(vinv_a_, b);
  for (int i = 0; i < rank_a_; ++i) {
    for (int j = 0; j < in_kernel.cols(); ++j) {
      if (in_kernel.at(i, j) != 0)
        throw error("HomologyPresentation: boundary image escapes the kernel");
    }
  }
  IntMat y(kernel_dim_, in_kernel.cols());
  for (int i = 0; i < kernel_dim_; ++i) {
    for (int j = 0; j < in_kernel.cols(); ++j) y.at(i, j) = in_kernel.at(rank_a_ + i, j);
  }
  snf_y_ = smith_normal_form(y);
  const int rank_y = snf_y_.rank;
  group_.betti = kernel_dim_ - rank_y;
  group_.torsion.clear();
  std::vector<int> kept;  // presentation-lattice indices of nontrivial generators
  for (int i = 0; i < rank_y; ++i) {
    const Int& d = snf_y_.invariant_factors[i];
    if (d >= 2) {
      group_.torsion.push_back(d);
      kept.push_back(i);
      orders_.push_back(d);
    }
  }
  for (int i = rank_y; i < kernel_dim_; ++i) {
    kept.push_back(i);
    orders_.push_back(0);
  }
  // Generator i of the presentation lattice is column i of U_y^{-1} in kernel
  // coordinates; push forward to chain coordinates.
  generators_ = IntMat(n_, static_cast<int>(kept.size()));
  for (int g = 0; g < static_cast<int>(kept.size()); ++g) {
    std::vector<Int> col(kernel_dim_);
    for (int i = 0; i < kernel_dim_; ++i) col[i] = snf_y_.u_inv.at(i, kept[g]);
    std::vector<Int> chain = mat_vec(kernel_basis_, col);
    for (int i = 0; i < n_; ++i) generators_.at(i, g) = chain[i];
  }
}

std::vector<Int> HomologyPresentation::presentation_coordinates(const std::vector<Int>& z) const {
  if (static_cast<int>(z.size()) != n_)
    throw error("HomologyPresentation: chain has wrong dimension");
  std::vector<Int> full = mat_vec(vinv_a_, z);
  for (int i = 0; i < rank_a_; ++i) {
    if (full[i] != 0) throw error("HomologyPresentation: chain is not a cycle");
  }
  std::vector<Int> kernel(full.begin() + rank_a_, full.end());
  return mat_vec(snf_y_.u, kernel);
}

bool HomologyPresentation::is_cycle(const std::vector<Int>& z) const {
  if (static_cast<int>(z.size()) != n_) return false;
  std::vector<Int> full = mat_vec(vinv_a_, z);
  for (int i = 0; i < rank_a_; ++i) {
    if (full[i] != 0) return false;
  }
  return true;
}

std::vector<Int> HomologyPresentation::class_coordinates(const std::vector<Int>& z) const {
  std::vector<Int> p = presentation_coordinates(z);
  const int rank_y = snf_y_.rank;
  std::vector<Int> out;
  for (int i = 0; i < rank_y; ++i) {
    const Int& d = snf_y_.invariant_factors[i];
    if (d >= 2) out.push_back(positive_mod(p[i], d));
  }
  for (int i = rank_y; i < kernel_dim_; ++i) out.push_back(p[i]);
  return out;
}

bool HomologyPresentation::is_boundary(const std::vector<Int>& z) const {
  std::vector<Int> p = presentation_coordinates(z);
  const int rank_y = snf_y_.rank;
  for (int i = 0; i < rank_y; ++i) {
    if (p[i] % snf_y_.invariant_factors[i] != 0) return false;
  }
  for (int i = rank_y; i < kernel_dim_; ++i) {
    if (p[i] != 0) return false;
  }
  return true;
}

std::optional<Int> HomologyPresentation::class_order(const std::vector<Int>& z) const {
  std::vector<Int> p = presentation_coordinates(z);
  const int rank_y = snf_y_.rank;
  for (int i = rank_y; i < kernel_dim_; ++i) {
    if (p[i] != 0) return std::nullopt;
  }
  Int order = 1;
  for (int i = 0; i < rank_y; ++i) {
    const Int& d = snf_y_.invariant_factors[i];
    Int g = boost::multiprecision::gcd(Int(boost::multiprecision::abs(p[i])), d);
    order = boost::multiprecision::lcm(order, Int(d / g));
  }
  return order;
}

HomologyGroup homology(const ChainComplex& c, int q) {
  return HomologyPresentation(c, q).group();
}

HomologyGroup relative_homology(const ChainComplex& c, const Subcomplex& a, int q) {
  return homology(quotient_complex(c, a).complex, q);
}

std::optional<Int> class_order(const ChainComplex& c, int q, const std::vector<Int>& z) {
  return HomologyPresentation(c, q).class_order(z);
}

ChainMap::ChainMap(const ChainComplex& source, const ChainComplex& target,
                   std::vector<IntMat> matrices)
    : source_(&source), target_(&target), zero_(0, 0) {
  const int top = source.top_degree();
  if (static_cast<int>(matrices.size()) > top + 1)
    throw error("ChainMap: more matrices than source degrees");
  matrices_.reserve(top + 1);
  for (int q = 0; q <= top; ++q) {
    if (q < static_cast<int>(matrices.size())) {
      IntMat& m = matrices[q];
      if (m.rows() != target.basis_count(q) || m.cols() != source.basis_count(q))
        throw error("ChainMap: matrix shape mismatch in degree " + std::to_string(q));
      matrices_.push_back(std::move(m));
    } else {
      if (target.basis_count(q) != 0)
        throw error("ChainMap: missing matrix for degree " + std::to_string(q));
      matrices_.push_back(IntMat(0, source.basis_count(q)));
    }
  }
  for (int q = 1; q <= top; ++q) {
    IntMat lhs = multiply(matrices_[q - 1], source.boundary(q));
    IntMat rhs;
    if (q <= target.top_degree()) {
      rhs = multiply(target.boundary(q), matrices_[q]);
    } else {
      rhs = IntMat(target.basis_count(q - 1), source.basis_count(q));
    }
    if (!(lhs == rhs))
      throw error("ChainMap: does not commute with the boundary in degree " + std::to_string(q));
  }
}

const IntMat& ChainMap::matrix(int q) const {
  if (q < 0 || q >= static_cast<int>(matrices_.size())) return zero_;
  return matrices_[q];
}

ChainMap ChainMap::identity(const ChainComplex& c) {
  std::vector<IntMat> mats;
  for (int q = 0; q <= c.top_degree(); ++q) mats.push_back(IntMat::identity(c.basis_count(q)));
  return ChainMap(c, c, std::move(mats));
}

ChainMap ChainMap::compose(const ChainMap& g, const ChainMap& f) {
  if (&f.target() != &g.source()) throw error("ChainMap::compose: middle complexes differ");
  std::vector<IntMat> mats;
  for (int q = 0; q <= f.source().top_degree(); ++q) {
    if (q <= g.source().top_degree()) {
      mats.push_back(multiply(g.matrix(q), f.matrix(q)));
    } else {
      mats.push_back(IntMat(g.target().basis_count(q), f.source().basis_count(q)));
    }
  }
  return ChainMap(f.source(), g.target(), std::move(mats));
}

IntMat induced_map(const ChainMap& f, int q) {
  const ChainComplex& src = f.source();
  const ChainComplex& tgt = f.target();
  const bool src_has = q >= 0 && q <= src.top_degree();
  const bool tgt_has = q >= 0 && q <= tgt.top_degree();
  if (!src_has && !tgt_has) return IntMat(0, 0);
  if (!src_has) return IntMat(HomologyPresentation(tgt, q).generators().cols(), 0);
  HomologyPresentation src_pres(src, q);
  const IntMat& gens = src_pres.generators();
  if (!tgt_has) return IntMat(0, gens.cols());
  HomologyPresentation tgt_pres(tgt, q);
  IntMat out(tgt_pres.generators().cols(), gens.cols());
  const IntMat& fq = f.matrix(q);
  for (int j = 0; j < gens.cols(); ++j) {
    std::vector<Int> g(src.basis_count(q));
    for (int i = 0; i < src.basis_count(q); ++i) g[i] = gens.at(i, j);
    std::vector<Int> image = mat_vec(fq, g);
    std::vector<Int> coords = tgt_pres.class_coordinates(image);
    for (int i = 0; i < out.rows(); ++i) out.at(i, j) = coords[i];
  }
  return out;
}

}  // namespace homsel
