#include "iwtower/cohomology.hpp"

#include <string>

#include "iwtower/error.hpp"

namespace iwtower {
namespace {

IntMatrix hcat(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

IntMatrix top_rows(const IntMatrix& a, std::size_t n) {
  IntMatrix out(n, a.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  return out;
}

// Columns spanning {x : M x = 0}.
IntMatrix kernel_basis(const IntMatrix& M) {
  auto sd = smith_decompose(M);
  IntMatrix out(M.cols(), M.cols() - sd.rank);
  for (std::size_t j = sd.rank; j < M.cols(); ++j)
    for (std::size_t i = 0; i < M.cols(); ++i) out(i, j - sd.rank) = sd.V(i, j);
  return out;
}

bool columns_in_lattice(const IntMatrix& X, const IntMatrix& R) {
  if (R.cols() == 0) return X.is_zero();
  auto sd = smith_decompose(R);
  IntMatrix Y = sd.U * X;
  for (std::size_t j = 0; j < Y.cols(); ++j)
    for (std::size_t i = 0; i < Y.rows(); ++i) {
      if (i < sd.rank) {
        if (!mpz_divisible_p(Y(i, j).get_mpz_t(), sd.D(i, i).get_mpz_t())) return false;
      } else if (Y(i, j) != 0) {
        return false;
      }
    }
  return true;
}

// span(K) / span(I) for I inside span(K), in the coordinates given by the
// Smith form of K: span(K) = U^{-1} span{d_i e_i}.
AbelianGroup subquotient(const IntMatrix& K, const IntMatrix& I) {
  if (K.cols() == 0) return AbelianGroup{};
  auto sd = smith_decompose(K);
  if (sd.rank == 0) return AbelianGroup{};
  IntMatrix Y = sd.U * I;
  IntMatrix C(sd.rank, I.cols());
  for (std::size_t j = 0; j < I.cols(); ++j)
    for (std::size_t i = 0; i < Y.rows(); ++i) {
      if (i < sd.rank) {
        mpz_class q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), Y(i, j).get_mpz_t(), sd.D(i, i).get_mpz_t());
        if (r != 0) throw DomainError("subquotient: image not contained in kernel");
        C(i, j) = q;
      } else if (Y(i, j) != 0) {
        throw DomainError("subquotient: image not contained in kernel");
      }
    }
  return cokernel(C);
}

// Kernel of the map induced by F on Z^n / L, as generators in Z^n.
IntMatrix induced_kernel(const IntMatrix& F, const IntMatrix& R) {
  IntMatrix negR(R.rows(), R.cols());
  for (std::size_t i = 0; i < R.rows(); ++i)
    for (std::size_t j = 0; j < R.cols(); ++j) negR(i, j) = -R(i, j);
  return top_rows(kernel_basis(hcat(F, negR)), F.cols());
}

IntMatrix matrix_power(const IntMatrix& a, long e) {
  IntMatrix out = IntMatrix::identity(a.rows());
  for (long k = 0; k < e; ++k) out = out * a;
  return out;
}

void require_order(long m) {
  if (m < 1) throw DomainError("group order must be >= 1, got " + std::to_string(m));
}

}  // namespace

void validate_module(const CyclicGModule& M) {
  require_order(M.m);
  if (M.sigma.rows() != M.rank || M.sigma.cols() != M.rank)
    throw DomainError("sigma must be " + std::to_string(M.rank) + "x" + std::to_string(M.rank));
  if (M.relations.rows() != M.rank)
    throw DomainError("relations must have " + std::to_string(M.rank) + " rows");
  if (!columns_in_lattice(M.sigma * M.relations, M.relations))
    throw DomainError("sigma does not preserve the relation lattice");
  IntMatrix s = matrix_power(M.sigma, M.m) - IntMatrix::identity(M.rank);
  if (!columns_in_lattice(s, M.relations))
    throw DomainError("sigma^" + std::to_string(M.m) + " is not the identity on the module");
}

AbelianGroup underlying_group(const CyclicGModule& M) {
  return cokernel(M.relations);
}

IntMatrix norm_matrix(const CyclicGModule& M) {
  IntMatrix acc(M.rank, M.rank), pw = IntMatrix::identity(M.rank);
  for (long k = 0; k < M.m; ++k) {
    acc = acc + pw;
    pw = pw * M.sigma;
  }
  return acc;
}

AbelianGroup tate(const CyclicGModule& M, int i) {
  validate_module(M);
  if (M.rank == 0) return AbelianGroup{};
  IntMatrix d = M.sigma - IntMatrix::identity(M.rank);
  IntMatrix nr = norm_matrix(M);
  if (((i % 2) + 2) % 2 == 0)
    return subquotient(induced_kernel(d, M.relations), hcat(nr, M.relations));
  return subquotient(induced_kernel(nr, M.relations), hcat(d, M.relations));
}

mpq_class herbrand_quotient(const CyclicGModule& M) {
  auto h0 = tate(M, 0), h1 = tate(M, 1);
  auto o0 = h0.order(), o1 = h1.order();
  if (!o0 || !o1) throw DomainError("Herbrand quotient undefined: infinite Tate group");
  mpq_class q(*o0, *o1);
  q.canonicalize();
  return q;
}

CyclicGModule trivial_module(long m, std::size_t rank) {
  require_order(m);
  return {m, rank, IntMatrix(rank, 0), IntMatrix::identity(rank)};
}

CyclicGModule regular_module(long m, std::size_t copies) {
  require_order(m);
  std::size_t n = static_cast<std::size_t>(m) * copies;
  CyclicGModule M{m, n, IntMatrix(n, 0), IntMatrix(n, n)};
  for (std::size_t c = 0; c < copies; ++c)
    for (long g = 0; g < m; ++g) M.sigma(c * m + (g + 1) % m, c * m + g) = 1;
  return M;
}

CyclicGModule permutation_module(long m, long h) {
  require_order(m);
  if (h < 1 || m % h != 0)
    throw DomainError("permutation module: " + std::to_string(h) + " does not divide " + std::to_string(m));
  auto M = regular_module(m / h);
  M.m = m;
  return M;
}

CyclicGModule direct_sum(const CyclicGModule& a, const CyclicGModule& b) {
  if (a.m != b.m) throw DomainError("direct sum of modules over different groups");
  std::size_t n = a.rank + b.rank;
  CyclicGModule M{a.m, n, IntMatrix(n, a.relations.cols() + b.relations.cols()), IntMatrix(n, n)};
  for (std::size_t i = 0; i < a.rank; ++i) {
    for (std::size_t j = 0; j < a.rank; ++j) M.sigma(i, j) = a.sigma(i, j);
    for (std::size_t j = 0; j < a.relations.cols(); ++j) M.relations(i, j) = a.relations(i, j);
  }
  for (std::size_t i = 0; i < b.rank; ++i) {
    for (std::size_t j = 0; j < b.rank; ++j) M.sigma(a.rank + i, a.rank + j) = b.sigma(i, j);
    for (std::size_t j = 0; j < b.relations.cols(); ++j)
      M.relations(a.rank + i, a.relations.cols() + j) = b.relations(i, j);
  }
  return M;
}

CyclicGModule augmentation_kernel(long m, std::size_t r) {
  require_order(m);
  std::size_t w = static_cast<std::size_t>(m - 1), n = w * r;
  CyclicGModule M{m, n, IntMatrix(n, 0), IntMatrix(n, n)};
  // sigma b_g = b_{g+1} - b_1, sigma b_{m-1} = -b_1
  for (std::size_t c = 0; c < r; ++c)
    for (std::size_t g = 0; g < w; ++g) {
      if (g + 1 < w) M.sigma(c * w + g + 1, c * w + g) += 1;
      M.sigma(c * w, c * w + g) -= 1;
    }
  return M;
}

CyclicGModule s_cycle_model(long m, std::size_t s) {
  if (s < 1) throw DomainError("S-cycle model needs at least one branch component");
  return augmentation_kernel(m, s - 1);
}

CyclicGModule degree_shift_model(long m) {
  auto M = regular_module(m);
  M.relations = IntMatrix(M.rank, 1);
  for (std::size_t i = 0; i < M.rank; ++i) M.relations(i, 0) = 1;
  return M;
}

CyclicGModule restrict_to_sublattice(const CyclicGModule& F, const IntMatrix& basis) {
  if (F.relations.cols() != 0) throw DomainError("restriction needs a free module");
  if (basis.rows() != F.rank || basis.cols() != F.rank)
    throw DomainError("sublattice basis must be square of size " + std::to_string(F.rank));
  auto sd = smith_decompose(basis);
  if (sd.rank != F.rank) throw DomainError("sublattice basis is not of full rank");
  // sigma' = basis^{-1} sigma basis = V D^{-1} U sigma basis
  IntMatrix X = sd.U * F.sigma * basis;
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = 0; j < X.cols(); ++j) {
      if (!mpz_divisible_p(X(i, j).get_mpz_t(), sd.D(i, i).get_mpz_t()))
        throw DomainError("sublattice is not sigma-stable");
      X(i, j) /= sd.D(i, i);
    }
  CyclicGModule M{F.m, F.rank, IntMatrix(F.rank, 0), sd.V * X};
  validate_module(M);
  return M;
}

CyclicGModule sublattice_model(long m, const IntMatrix& basis) {
  return restrict_to_sublattice(trivial_module(m, basis.rows()), basis);
}

ShortExactSequence image_sequence(const CyclicGModule& B, const IntMatrix& phi) {
  validate_module(B);
  if (B.relations.cols() != 0) throw DomainError("image sequence needs a free middle term");
  if (phi.rows() != B.rank || phi.cols() != B.rank) throw DomainError("phi has the wrong shape");
  if (!(phi * B.sigma == B.sigma * phi)) throw DomainError("phi is not equivariant");
  return {{B.m, B.rank, kernel_basis(phi), B.sigma}, B, {B.m, B.rank, phi, B.sigma}};
}

int hbar_defect(unsigned long p, const HbarHypotheses& hyp) {
  if (!is_prime(p)) throw DomainError("hbar defect: p must be prime");
  if (!hyp.qhs3_levels) throw DomainError("hbar defect: layers must be rational homology spheres");
  if (!hyp.cyclic_of_order_p) throw DomainError("hbar defect: Galois group must be cyclic of order p");
  auto Z2 = degree_shift_model(static_cast<long>(p));
  int h1 = tate(Z2, 1).p_rank(p);
  int h2 = tate(Z2, 2).p_rank(p);
  return h2 - h1;
}

}  // namespace iwtower
