#pragma once

#include <vector>

namespace invforge {

/// One-line notation, 0-based: perm[i] is the image of i.
using Perm = std::vector<int>;

Perm identity_perm(int d);
/// All permutations of {0..d-1} in lexicographic order of their one-line form.
std::vector<Perm> all_perms(int d);
int perm_sign(const Perm& p);
/// (a o b)(i) = a(b(i)).
Perm compose_perms(const Perm& a, const Perm& b);
Perm invert_perm(const Perm& p);
bool is_perm(const Perm& p);
/// Transposition of positions i and i+1 on d points.
Perm adjacent_transposition(int d, int i);

}  // namespace invforge
