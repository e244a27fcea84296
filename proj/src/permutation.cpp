#include "opmin/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace opmin {

Perm identity_perm(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm compose(const Perm& a, const Perm& b) {
  if (a.size() != b.size()) throw std::invalid_argument("compose: size mismatch");
  Perm r(a.size());
  for (std::size_t x = 0; x < b.size(); ++x) r[x] = a[b[x]];
  return r;
}

Perm inverse(const Perm& p) {
  Perm r(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) r[p[x]] = static_cast<int>(x);
  return r;
}

Perm transposition(int n, int a, int b) {
  Perm p = identity_perm(n);
  std::swap(p[a], p[b]);
  return p;
}

bool is_identity(const Perm& p) {
  for (std::size_t x = 0; x < p.size(); ++x)
    if (p[x] != static_cast<int>(x)) return false;
  return true;
}

int sign(const Perm& p) {
  int s = 1;
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = a + 1; b < p.size(); ++b)
      if (p[a] > p[b]) s = -s;
  return s;
}

std::vector<Perm> all_perms(int n) {
  std::vector<Perm> out;
  Perm p = identity_perm(n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<int> adjacent_word(const Perm& p) {
  // peel descents from the right: p = p' * s_a
  Perm q = p;
  std::vector<int> found;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a + 1 < q.size(); ++a) {
      if (q[a] > q[a + 1]) {
        std::swap(q[a], q[a + 1]);
        found.push_back(static_cast<int>(a));
        changed = true;
      }
    }
  }
  std::reverse(found.begin(), found.end());
  return found;
}

Perm restrict_perm(const Perm& sigma, int i) {
  const int n = static_cast<int>(sigma.size());
  const int j = inverse(sigma)[i];
  Perm r(n - 1);
  for (int x = 0; x < n - 1; ++x) {
    int xs = x < j ? x : x + 1;
    int y = sigma[xs];
    r[x] = y < i ? y : y - 1;
  }
  return r;
}

Perm block_perm(const Perm& sigma, int i, const Perm& tau) {
  const int m = static_cast<int>(sigma.size());
  const int k = static_cast<int>(tau.size());
  Perm r(m + k - 1);
  const int si = sigma[i];
  auto place = [&](int y) { return y < si ? y : y + k - 1; };
  for (int x = 0; x < m + k - 1; ++x) {
    if (x < i)
      r[x] = place(sigma[x]);
    else if (x < i + k)
      r[x] = si + tau[x - i];
    else
      r[x] = place(sigma[x - k + 1]);
  }
  return r;
}

std::string perm_to_string(const Perm& p) {
  std::string s = "[";
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (x) s += ' ';
    s += std::to_string(p[x] + 1);
  }
  return s + "]";
}

}  // namespace opmin
