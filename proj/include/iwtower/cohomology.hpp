#pragma once

#include <gmpxx.h>

#include <vector>

#include "iwtower/arith.hpp"

namespace iwtower {

// A module over the cyclic group of order m: Z^rank modulo the lattice spanned
// by the columns of `relations`, with the generator acting by `sigma` on
// column vectors of the ambient lattice.
struct CyclicGModule {
  long m = 1;
  std::size_t rank = 0;
  IntMatrix relations;  // rank x k
  IntMatrix sigma;      // rank x rank
};

// Throws DomainError unless sigma preserves the relation lattice and sigma^m
// is the identity on the quotient.
void validate_module(const CyclicGModule& M);

AbelianGroup underlying_group(const CyclicGModule& M);
IntMatrix norm_matrix(const CyclicGModule& M);  // 1 + sigma + ... + sigma^{m-1}

// Tate cohomology, i taken mod 2:
//   H^0 = ker(sigma - 1) / im(Nr),  H^1 = ker(Nr) / im(sigma - 1).
AbelianGroup tate(const CyclicGModule& M, int i);

// #H^0 / #H^1; DomainError when either group is infinite.
mpq_class herbrand_quotient(const CyclicGModule& M);

CyclicGModule trivial_module(long m, std::size_t rank);
CyclicGModule regular_module(long m, std::size_t copies = 1);
// Z[G/H], |G| = m, |H| = h, sigma shifting the m/h cosets.
CyclicGModule permutation_module(long m, long h);
CyclicGModule direct_sum(const CyclicGModule& a, const CyclicGModule& b);

// Kernel of the augmentation Z[G]^r -> Z^r, in the basis sigma^g e_c - e_c,
// g = 1..m-1. Shifts degree against trivial Z^r: H^i(I_G^r) = H^{i-1}(Z^r).
CyclicGModule augmentation_kernel(long m, std::size_t r);

// S-cycle model for a cover branched along s >= 1 components: the image of
// the degree-one boundary, I_G^{s-1}. H^0 = 0, H^1 = (Z/m)^{s-1}.
CyclicGModule s_cycle_model(long m, std::size_t s);

// Z[G] / Z.Nr, so that H^i equals H^{i+1} of trivial Z.
CyclicGModule degree_shift_model(long m);

// The sublattice of a free module spanned by the columns of `basis` (full
// rank, sigma-stable), in the coordinates of that basis.
CyclicGModule restrict_to_sublattice(const CyclicGModule& free_module, const IntMatrix& basis);

// Finite-index sublattice of Z^s with trivial action.
CyclicGModule sublattice_model(long m, const IntMatrix& basis);

// 0 -> phi(B) -> B -> B / phi(B) -> 0 for a free B and an equivariant phi.
struct ShortExactSequence {
  CyclicGModule sub, middle, quotient;
};
ShortExactSequence image_sequence(const CyclicGModule& free_module, const IntMatrix& phi);

struct HbarHypotheses {
  bool qhs3_levels = false;      // every layer is a rational homology sphere
  bool cyclic_of_order_p = false;
};
// hbar_2 - hbar_1 for the degree-two cycle group of a degree-p layer: hbar_i is
// the F_p-rank of H^i(Z_2), computed on the degree-shift model.
int hbar_defect(unsigned long p, const HbarHypotheses& hyp);

}  // namespace iwtower
