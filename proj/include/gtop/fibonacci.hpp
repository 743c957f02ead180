#pragma once

// The free-group endomorphism phi: x -> y, y -> xy and the Fibonacci words
// f_0 = x, f_1 = y, f_{n+1} = f_{n-1} f_n.

#include <cstddef>

#include "gtop/group.hpp"
#include "gtop/report.hpp"

namespace gtop {

// Free group on x, y; letter 1 is x, letter 2 is y.
Group fib_group();

struct FibWord {
  Word word;
  unsigned n = 0;
};

// Throws PreconditionError on letters other than x, y and their inverses.
Word phi_apply(const Word& w);
Word phi_iterate(Word w, unsigned n);
FibWord fib_word(unsigned n);

// x y x^-1 y^-1.
Word commutator_xy();
Word commutator(const Word& a, const Word& b);

// phi^n([x,y]) = [phi^n(x), phi^{n+1}(x)], and equals [x,y] for even n and
// its inverse for odd n.
VerificationReport verify_fib_identity(unsigned n);
// Recurrence against iteration, Fibonacci lengths, and the identity for all
// k <= n_max.
VerificationReport verify_fibonacci(unsigned n_max);

}  // namespace gtop
