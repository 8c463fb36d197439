#include "polycap/problem_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "polycap/error.hpp"

namespace polycap {

Dims make_dims(int m, int n) {
    if (m < 1) throw ValidationError("invalid dimensions: m = " + std::to_string(m) + " violates m >= 1");
    if (n < 2) throw ValidationError("invalid dimensions: n = " + std::to_string(n) + " violates n >= 2");
    if (n > 2 * m + 1) {
        throw ValidationError("invalid dimensions: n = " + std::to_string(n) + " violates n <= 2m+1 = " +
                              std::to_string(2 * m + 1));
    }
    Dims d;
    d.m = m;
    d.n = n;
    d.n_parity = (n % 2 == 1) ? Parity::odd : Parity::even;
    d.m_parity = (m % 2 == 1) ? Parity::odd : Parity::even;
    // 2λ = 2m - n + 1 for odd n, 2m - n for even n.
    d.lambda = d.n_odd() ? (2 * m - n + 1) / 2 : (2 * m - n) / 2;
    return d;
}

IndexSetZ::IndexSetZ(std::vector<int> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (members_.empty()) throw ValidationError("index set Z must be nonempty");
}

bool IndexSetZ::contains(int p) const { return std::binary_search(members_.begin(), members_.end(), p); }

IndexSetZ index_set_Z(const Dims& dims) {
    std::vector<int> out;
    const int m = dims.m;
    const int h = dims.n / 2;
    if (dims.n_odd()) {
        for (int p = 0; p <= dims.lambda; ++p) out.push_back(p);
    } else {
        // p = -n/2 + 2j (m even) or -n/2 + 1 + 2j (m odd), up to m - n/2, kept when p >= 0.
        const int first = (dims.m_parity == Parity::even) ? -h + 2 : -h + 1;
        for (int p = first; p <= m - h; p += 2) {
            if (p >= 0) out.push_back(p);
        }
    }
    return IndexSetZ(std::move(out));
}

std::int64_t harmonic_multiplicity(int n, int p) {
    if (n < 2 || p < 0) throw ValidationError("harmonic_multiplicity requires n >= 2, p >= 0");
    if (p == 0) return 1;
    if (n == 2) return 2;
    // (2p+n-2) (p+n-3)! / (p! (n-2)!)
    BigInt binom = 1;  // C(p+n-3, n-2) computed incrementally
    for (int i = 1; i <= n - 2; ++i) binom = binom * (p + i - 1) / i;
    // binom now equals (p+n-3)! / ((p-1)! (n-2)!); divide by p to get (p+n-3)!/(p!(n-2)!)
    BigInt total = binom * (2 * p + n - 2) / p;
    if (total > BigInt(std::numeric_limits<std::int64_t>::max())) {
        throw ValidationError("harmonic multiplicity overflows 64-bit range");
    }
    return total.convert_to<std::int64_t>();
}

PiElement::PiElement(Dims dims, std::map<ModeIndex, double> coeffs)
    : dims_(dims), coeffs_(std::move(coeffs)) {
    double s = 0.0;
    for (const auto& [k, b] : coeffs_) s += b * b;
    norm_ = std::sqrt(s);
}

std::map<int, double> PiElement::degree_weights() const {
    std::map<int, double> w;
    for (const auto& [k, b] : coeffs_) w[k.p] += b * b;
    return w;
}

PiElement PiElement::normalized() const {
    if (norm_ == 0.0) throw ValidationError("the zero element of Π cannot be normalized");
    auto c = coeffs_;
    for (auto& [k, b] : c) b /= norm_;
    return PiElement(dims_, std::move(c));
}

PiElement pi_element(const Dims& dims, std::map<ModeIndex, double> coeffs) {
    const IndexSetZ z = index_set_Z(dims);
    for (const auto& [k, b] : coeffs) {
        if (!z.contains(k.p)) {
            throw ValidationError("coefficient at degree p = " + std::to_string(k.p) + " is outside Z");
        }
        if (k.l < 0 || k.l >= harmonic_multiplicity(dims.n, k.p)) {
            throw ValidationError("harmonic index l = " + std::to_string(k.l) + " out of range for degree " +
                                  std::to_string(k.p));
        }
        if (!std::isfinite(b)) throw ValidationError("non-finite coefficient in Π element");
    }
    return PiElement(dims, std::move(coeffs));
}

PiElement pure_mode(const Dims& dims, int p, std::int64_t l) { return pi_element(dims, {{ModeIndex{p, l}, 1.0}}); }

}  // namespace polycap
