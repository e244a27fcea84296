#pragma once

#include <string>
#include <vector>

namespace opmin {

// 0-based; p[x] is the image of x. Composition (a*b)(x) = a(b(x)).
using Perm = std::vector<int>;

Perm identity_perm(int n);
Perm compose(const Perm& a, const Perm& b);
Perm inverse(const Perm& p);
Perm transposition(int n, int a, int b);
bool is_identity(const Perm& p);
int sign(const Perm& p);

// All of Sigma_n in lexicographic order of image sequences.
std::vector<Perm> all_perms(int n);

// Word a_1..a_r with p = s_{a_1} * ... * s_{a_r}, s_a swapping a and a+1.
std::vector<int> adjacent_word(const Perm& p);

// sigma|_i in Sigma_{n-1}: the permutation induced on the complement of input i
// (target side) and sigma^{-1}(i) (source side). i is 0-based.
Perm restrict_perm(const Perm& sigma, int i);

// Block permutation sigma o_i tau acting on the inputs of alpha o_i beta.
Perm block_perm(const Perm& sigma, int i, const Perm& tau);

std::string perm_to_string(const Perm& p);

}  // namespace opmin
