#pragma once

#include <cstdint>
#include <vector>

namespace csptk {

// Deterministic splitmix64 generator. std::mt19937 would also be portable,
// but the standard distributions are not, so we roll our own sampling.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n)
    int below(int n) {
        return n <= 1 ? 0 : static_cast<int>(next() % static_cast<uint64_t>(n));
    }

    bool chance(double p) {
        return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0) < p;
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) { return v[below(static_cast<int>(v.size()))]; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            std::swap(v[i], v[below(i + 1)]);
        }
    }

    Rng fork() { return Rng(next() ^ 0xd1b54a32d192ed03ULL); }

private:
    uint64_t state_;
};

} // namespace csptk
