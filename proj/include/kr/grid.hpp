#pragma once
#include <cmath>
#include <cstddef>
#include <vector>

namespace kr {

// Smallest odd 7-smooth integer >= n. Odd keeps the momentum lattice
// symmetric (m in [-Mi, Mi]); 7-smooth keeps the transforms fast.
inline int friendly_odd(int n) {
    for (int cand = n | 1;; cand += 2) {
        int r = cand;
        for (int p : {3, 5, 7})
            while (r % p == 0) r /= p;
        if (r == 1) return cand;
    }
}

// Momentum lattice in FFT slot order: slot s holds m = s for s <= (N-1)/2,
// m = s - N above. N must be odd.
struct MomentumGrid {
    int N = 0;        // transform size (odd, 7-smooth)
    int Mi = 0;       // internal half-width (N-1)/2
    int edge_lo = 0;  // first slot of the contiguous |m| > 0.9*Mi band
    int edge_len = 0;

    std::vector<double> cosx;  // cos(2*pi*j/N)
    std::vector<int> m;        // slot -> momentum index

    static MomentumGrid make(int basis_half_width);
};

inline MomentumGrid MomentumGrid::make(int basis_half_width) {
    MomentumGrid g;
    g.N = friendly_odd(2 * basis_half_width + 1);
    g.Mi = (g.N - 1) / 2;
    const int e = static_cast<int>(0.9 * g.Mi);
    g.edge_lo = e + 1;
    g.edge_len = g.N - 1 - 2 * e;
    g.cosx.resize(g.N);
    g.m.resize(g.N);
    for (int j = 0; j < g.N; ++j) {
        g.cosx[j] = std::cos(2.0 * M_PI * j / g.N);
        g.m[j] = (j <= g.Mi) ? j : j - g.N;
    }
    return g;
}

}  // namespace kr
