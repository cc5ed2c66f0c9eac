#ifndef SUBCOND_CORE_HPP
#define SUBCOND_CORE_HPP

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace subcond {

using Symbol = int;
using Word = std::vector<Symbol>;

// Alphabet of symbols 0..size-1; size 2 is the hypercube.
struct Alphabet {
    int size = 2;

    explicit Alphabet(int s = 2) : size(s) {
        if (s < 2) throw std::invalid_argument("alphabet size must be >= 2");
    }
    bool operator==(const Alphabet&) const = default;
};

// A conditioning prefix: the first |symbols| coordinates are fixed, the rest
// are free. The empty prefix is the unconditioned distribution.
using Prefix = std::span<const Symbol>;

inline void validate_prefix(Prefix prefix, int n, const Alphabet& alphabet) {
    if (static_cast<int>(prefix.size()) > n)
        throw std::invalid_argument("prefix longer than dimension");
    for (Symbol c : prefix)
        if (c < 0 || c >= alphabet.size)
            throw std::invalid_argument("prefix symbol out of range");
}

inline void validate_word(const Word& w, int n, const Alphabet& alphabet) {
    if (static_cast<int>(w.size()) != n)
        throw std::invalid_argument("word length does not match dimension");
    for (Symbol c : w)
        if (c < 0 || c >= alphabet.size)
            throw std::invalid_argument("word symbol out of range");
}

using Rng = std::mt19937_64;

// splitmix64, used to derive independent per-trial seeds from a base seed.
inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base ^ (index + 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::string word_to_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (Symbol c : w) {
        if (c < 10)
            s.push_back(static_cast<char>('0' + c));
        else
            s += "," + std::to_string(c);
    }
    return s;
}

inline Word word_from_string(const std::string& s, const Alphabet& alphabet) {
    Word w;
    if (s.find(',') != std::string::npos) {
        std::size_t pos = 0;
        while (pos < s.size()) {
            std::size_t next = s.find(',', pos);
            if (next == std::string::npos) next = s.size();
            w.push_back(std::stoi(s.substr(pos, next - pos)));
            pos = next + 1;
        }
    } else {
        for (char ch : s) {
            if (ch < '0' || ch > '9')
                throw std::invalid_argument("bad symbol character in word");
            w.push_back(ch - '0');
        }
    }
    for (Symbol c : w)
        if (c < 0 || c >= alphabet.size)
            throw std::invalid_argument("word symbol out of range");
    return w;
}

}  // namespace subcond

#endif
