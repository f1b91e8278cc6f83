#pragma once

// Integer chain complexes and their homology: absolute and relative groups
// with torsion, deterministic generator choices, maps induced on homology by
// chain maps, and orders of cycle classes. All arithmetic is exact.

#include <optional>
#include <string>
#include <vector>

#include "homsel/common.hpp"
#include "homsel/snf.hpp"

namespace homsel {

// Betti number plus torsion coefficients in a divisibility chain.
struct HomologyGroup {
  int betti = 0;
  std::vector<Int> torsion;  // each >= 2, each dividing the next

  bool operator==(const HomologyGroup& o) const { return betti == o.betti && torsion == o.torsion; }
};

// A finite chain complex in degrees 0..D. boundary(q) maps degree-q chains to
// degree-(q-1) chains; d*d = 0 is checked at construction and violation is a
// hard error.
class ChainComplex {
 public:
  // boundaries[q-1] is D_q for q = 1..D (so `boundaries` has D entries).
  // Labels are optional (empty vector allowed); when present they must match
  // the basis counts.
  ChainComplex(std::vector<int> basis_counts, std::vector<IntMat> boundaries,
               std::vector<std::vector<std::string>> labels = {});

  int top_degree() const { return static_cast<int>(basis_counts_.size()) - 1; }
  int basis_count(int q) const;
  // D_q as a matrix; degree 0 yields the 0 x n_0 matrix, degree D+1 the
  // n_D x 0 matrix, so callers can treat the complex as extended by zero.
  const IntMat& boundary(int q) const;
  const std::vector<std::string>& labels(int q) const;
  bool has_labels() const { return !labels_.empty(); }

 private:
  std::vector<int> basis_counts_;
  std::vector<IntMat> boundary_;  // indexed by q = 0..D+1 (ends are zero maps)
  std::vector<std::vector<std::string>> labels_;
};

// A boundary-closed selection of cells of a parent complex.
class Subcomplex {
 public:
  // selected[q] lists selected basis indices in degree q (sorted, unique).
  Subcomplex(const ChainComplex& parent, std::vector<std::vector<int>> selected);

  const ChainComplex& parent() const { return *parent_; }
  const std::vector<int>& selected(int q) const;
  bool contains(int q, int index) const;

 private:
  const ChainComplex* parent_;
  std::vector<std::vector<int>> selected_;
  std::vector<std::vector<char>> mask_;
};

// The quotient complex C/A together with the index maps relating the two.
struct QuotientComplex {
  ChainComplex complex;
  // old_to_new[q][i] is the index in the quotient of cell i of the parent, or
  // -1 when the cell belongs to the subcomplex.
  std::vector<std::vector<int>> old_to_new;
  std::vector<std::vector<int>> new_to_old;
};

QuotientComplex quotient_complex(const ChainComplex& c, const Subcomplex& a);

// Homology of one degree with a deterministic generator basis: torsion
// generators first (in invariant-factor order), then free generators.
class HomologyPresentation {
 public:
  HomologyPresentation(const ChainComplex& c, int q);

  const HomologyGroup& group() const { return group_; }
  int degree() const { return q_; }
  // One column per nontrivial generator, expressed in chain coordinates.
  const IntMat& generators() const { return generators_; }
  // Order of each generator: torsion order, or 0 for a free generator.
  const std::vector<Int>& orders() const { return orders_; }

  // Coordinates of the class of cycle z in the generator basis (torsion
  // coordinates reduced into [0, order)). Throws if z is not a cycle.
  std::vector<Int> class_coordinates(const std::vector<Int>& z) const;
  bool is_cycle(const std::vector<Int>& z) const;
  bool is_boundary(const std::vector<Int>& z) const;
  // Smallest positive r with r*[z] = 0, or std::nullopt when [z] has
  // infinite order.
  std::optional<Int> class_order(const std::vector<Int>& z) const;

 private:
  // Raw (unreduced) coordinates of z in the presentation lattice basis.
  std::vector<Int> presentation_coordinates(const std::vector<Int>& z) const;

  int q_;
  int n_ = 0;          // chain dimension in degree q
  int kernel_dim_ = 0; // dimension of ker D_q
  HomologyGroup group_;
  IntMat generators_;
  std::vector<Int> orders_;
  IntMat vinv_a_;              // inverse column transform of SNF(D_q)
  int rank_a_ = 0;             // rank of D_q
  SmithResult snf_y_;          // SNF of the image presentation in kernel coords
  IntMat kernel_basis_;        // n x kernel_dim
};

HomologyGroup homology(const ChainComplex& c, int q);
HomologyGroup relative_homology(const ChainComplex& c, const Subcomplex& a, int q);

// Smallest positive r with r*[z] = 0 in H_q(C), or std::nullopt if infinite.
std::optional<Int> class_order(const ChainComplex& c, int q, const std::vector<Int>& z);

// An integer chain map between complexes; commuting with the boundaries is
// checked at construction.
class ChainMap {
 public:
  // matrices[q] has shape target.basis_count(q) x source.basis_count(q) for
  // q = 0..min(top degrees). Missing trailing degrees are treated as zero.
  ChainMap(const ChainComplex& source, const ChainComplex& target, std::vector<IntMat> matrices);

  const ChainComplex& source() const { return *source_; }
  const ChainComplex& target() const { return *target_; }
  const IntMat& matrix(int q) const;

  static ChainMap identity(const ChainComplex& c);
  static ChainMap compose(const ChainMap& g, const ChainMap& f);  // g after f

 private:
  const ChainComplex* source_;
  const ChainComplex* target_;
  std::vector<IntMat> matrices_;
  IntMat zero_;  // shared empty fallback
};

// Matrix of F_* : H_q(source) -> H_q(target) on the canonical generator
// bases (torsion coordinates reduced into [0, order)).
IntMat induced_map(const ChainMap& f, int q);

}  // namespace homsel
