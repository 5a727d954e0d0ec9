#ifndef WQED_FOCK_BASIS_HPP
#define WQED_FOCK_BASIS_HPP

#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wqed {

/// Photon counts per site; the bosonic half of a basis element of a
/// fixed-photon-number sector on an L-site chain.
struct OccupationState {
    std::vector<std::uint32_t> counts;

    int sites() const { return static_cast<int>(counts.size()); }

    std::uint32_t total() const {
        std::uint32_t m = 0;
        for (auto n : counts) m += n;
        return m;
    }

    bool operator==(const OccupationState& o) const = default;
};

/// Which qubits are excited. Bit s set means qubit s is |up>.
struct QubitConfig {
    std::uint32_t excited = 0;
    int n_qubits = 0;

    bool is_excited(int s) const { return (excited >> s) & 1u; }
    int popcount() const { return std::popcount(excited); }

    bool operator==(const QubitConfig&) const = default;
};

/// One block of the excitation-conserving basis: a qubit configuration
/// together with the complementary photon number.
struct SectorBasis {
    QubitConfig qubits;
    int photons = 0;         // m_sigma = N_exc - popcount(excited)
    std::size_t offset = 0;  // start index in the global state vector
    std::size_t dim = 0;     // C(L + m - 1, L - 1)
};

namespace detail {
inline constexpr std::uint64_t kBinomOverflow = std::numeric_limits<std::uint64_t>::max();

inline std::uint64_t add_saturating(std::uint64_t a, std::uint64_t b) {
    if (a == kBinomOverflow || b == kBinomOverflow) return kBinomOverflow;
    std::uint64_t s = a + b;
    return s < a ? kBinomOverflow : s;
}
}  // namespace detail

/// Pascal-triangle table of C(n, k), n <= n_max, with saturating arithmetic.
/// Built once per (L, N_exc) pair; rank/unrank and Hamiltonian assembly
/// look entries up in their inner loops.
class BinomialTable {
public:
    explicit BinomialTable(int n_max) : n_max_(n_max), rows_(static_cast<std::size_t>(n_max) + 1) {
        if (n_max < 0) throw std::invalid_argument("BinomialTable: n_max must be >= 0");
        for (int n = 0; n <= n_max; ++n) {
            auto& row = rows_[static_cast<std::size_t>(n)];
            row.resize(static_cast<std::size_t>(n) + 1);
            row.front() = row.back() = 1;
            for (int k = 1; k < n; ++k)
                row[static_cast<std::size_t>(k)] =
                    detail::add_saturating(rows_[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(k) - 1],
                                           rows_[static_cast<std::size_t>(n) - 1][static_cast<std::size_t>(k)]);
        }
    }

    int n_max() const { return n_max_; }

    std::uint64_t choose(int n, int k) const {
        if (k < 0 || k > n) return 0;
        if (n > n_max_) throw std::out_of_range("BinomialTable: n exceeds table size");
        std::uint64_t v = rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
        if (v == detail::kBinomOverflow) throw std::overflow_error("basis too large: binomial overflows 64 bits");
        return v;
    }

private:
    int n_max_;
    std::vector<std::vector<std::uint64_t>> rows_;
};

/// Number of occupation states of m photons on L sites: C(L + m - 1, L - 1).
/// Throws std::overflow_error ("basis too large") beyond 64-bit range.
inline std::uint64_t sector_dimension(int L, int m) {
    if (L < 1) throw std::invalid_argument("sector_dimension: L must be >= 1");
    if (m < 0) throw std::invalid_argument("sector_dimension: m must be >= 0");
    // multiplicative evaluation of C(L+m-1, m), overflow-checked
    std::uint64_t r = 1;
    for (int i = 1; i <= m; ++i) {
        const std::uint64_t num = static_cast<std::uint64_t>(L - 1 + i);
        if (r > std::numeric_limits<std::uint64_t>::max() / num)
            throw std::overflow_error("basis too large: sector dimension overflows 64 bits");
        r = r * num / static_cast<std::uint64_t>(i);  // exact: r*num divisible by i here
    }
    return r;
}

/// All qubit configurations with popcount <= n_exc, bitmask ascending,
/// each paired with its photon number and cumulative offset.
inline std::vector<SectorBasis> enumerate_sectors(int n_qubits, int n_exc, int L) {
    if (n_qubits < 0 || n_exc < 0 || L < 1)
        throw std::invalid_argument("enumerate_sectors: require n_qubits >= 0, n_exc >= 0, L >= 1");
    if (n_qubits > 30) throw std::invalid_argument("enumerate_sectors: more than 30 qubits unsupported");
    std::vector<SectorBasis> out;
    std::size_t offset = 0;
    const std::uint32_t n_masks = 1u << n_qubits;
    for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
        const int ne = std::popcount(mask);
        if (ne > n_exc) continue;
        SectorBasis s;
        s.qubits = QubitConfig{mask, n_qubits};
        s.photons = n_exc - ne;
        s.offset = offset;
        s.dim = static_cast<std::size_t>(sector_dimension(L, s.photons));
        offset += s.dim;
        out.push_back(std::move(s));
    }
    return out;
}

/// Rank of an occupation state within its (L, m) sector.
///
/// The sector order is lexicographic descending on the count tuple
/// (combinatorial number system): rank 0 is (m, 0, ..., 0), the last state
/// is (0, ..., 0, m). Cost O(L) given the binomial table.
inline std::size_t rank(const OccupationState& state, const BinomialTable& tab) {
    const int L = state.sites();
    if (L < 1) throw std::invalid_argument("rank: empty occupation state");
    std::uint64_t r = 0;
    std::uint32_t remaining = state.total();
    for (int i = 0; i < L - 1; ++i) {
        const std::uint32_t q = remaining - state.counts[static_cast<std::size_t>(i)];
        // states with a larger count at site i, same prefix, precede this one
        if (q > 0) r += tab.choose(static_cast<int>(q) + L - i - 2, L - i - 1);
        remaining -= state.counts[static_cast<std::size_t>(i)];
    }
    return static_cast<std::size_t>(r);
}

/// Inverse of rank for the (L, m) sector. Throws if i is out of range.
inline void unrank_into(std::size_t i, int L, int m, const BinomialTable& tab, OccupationState& out) {
    out.counts.assign(static_cast<std::size_t>(L), 0);
    std::uint64_t r = i;
    int remaining = m;
    for (int site = 0; site < L - 1; ++site) {
        const int K = L - site - 1;  // sites to the right
        // largest n at this site whose preceding-block offset is <= r
        std::uint64_t prev = 0;
        int n = remaining;
        for (int q = 0; q <= remaining; ++q) {
            // offset of block with count (remaining - q) at this site
            const std::uint64_t off = (q == 0) ? 0 : tab.choose(q + K - 1, K);
            if (off <= r) {
                n = remaining - q;
                prev = off;
            } else {
                break;
            }
        }
        out.counts[static_cast<std::size_t>(site)] = static_cast<std::uint32_t>(n);
        r -= prev;
        remaining -= n;
    }
    out.counts[static_cast<std::size_t>(L) - 1] = static_cast<std::uint32_t>(remaining);
    if (r != 0) throw std::out_of_range("unrank: index exceeds sector dimension");
}

inline OccupationState unrank(std::size_t i, int L, int m, const BinomialTable& tab) {
    OccupationState s;
    unrank_into(i, L, m, tab, s);
    return s;
}

/// Advance an occupation state to its successor in the descending-lex order.
/// Returns false when the input was the last state of the sector.
/// Amortized O(1); used to stream a sector without repeated unranking.
inline bool next_state(OccupationState& s) {
    const int L = s.sites();
    int k = -1;
    for (int i = L - 2; i >= 0; --i) {
        if (s.counts[static_cast<std::size_t>(i)] > 0) {
            k = i;
            break;
        }
    }
    if (k < 0) return false;
    std::uint32_t tail = 1;  // the photon removed from site k plus everything to its right
    for (int i = k + 1; i < L; ++i) {
        tail += s.counts[static_cast<std::size_t>(i)];
        s.counts[static_cast<std::size_t>(i)] = 0;
    }
    s.counts[static_cast<std::size_t>(k)] -= 1;
    s.counts[static_cast<std::size_t>(k) + 1] = tail;
    return true;
}

/// Move one photon between neighboring sites; returns the target state and the
/// bosonic matrix element sqrt(n_from * (n_to + 1)). Returns amplitude 0 and an
/// unchanged copy when the source site is empty (caller skips the transition).
inline std::pair<OccupationState, double> hop_amplitude(const OccupationState& state, int from, int to) {
    const int L = state.sites();
    if (from < 0 || from >= L || to < 0 || to >= L)
        throw std::invalid_argument("hop_amplitude: site out of range");
    if (from - to != 1 && to - from != 1)
        throw std::invalid_argument("hop_amplitude: sites must be nearest neighbors");
    OccupationState target = state;
    const std::uint32_t n_from = state.counts[static_cast<std::size_t>(from)];
    if (n_from == 0) return {std::move(target), 0.0};
    const std::uint32_t n_to = state.counts[static_cast<std::size_t>(to)];
    target.counts[static_cast<std::size_t>(from)] = n_from - 1;
    target.counts[static_cast<std::size_t>(to)] = n_to + 1;
    const double amp = std::sqrt(static_cast<double>(n_from) * (static_cast<double>(n_to) + 1.0));
    return {std::move(target), amp};
}

/// Sector-decomposed basis of n qubits and N_exc total excitations on L sites.
/// Owns the binomial table and the sector layout; index() is the hot-path
/// lookup used by Hamiltonian assembly.
class Basis {
public:
    Basis(int n_qubits, int n_exc, int L)
        : n_qubits_(n_qubits),
          n_exc_(n_exc),
          L_(L),
          table_(L + n_exc),  // rank/unrank need C(n, k) up to n = L + m - 1
          sectors_(enumerate_sectors(n_qubits, n_exc, L)) {
        sector_by_mask_.assign(std::size_t{1} << n_qubits, npos);
        for (std::size_t i = 0; i < sectors_.size(); ++i)
            sector_by_mask_[sectors_[i].qubits.excited] = i;
        dim_ = sectors_.empty() ? 0 : sectors_.back().offset + sectors_.back().dim;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    int n_qubits() const { return n_qubits_; }
    int n_exc() const { return n_exc_; }
    int L() const { return L_; }
    std::size_t dim() const { return dim_; }
    const std::vector<SectorBasis>& sectors() const { return sectors_; }
    const BinomialTable& binomials() const { return table_; }

    /// Sector holding a given qubit configuration; npos if popcount > N_exc.
    std::size_t sector_index(std::uint32_t mask) const {
        return mask < sector_by_mask_.size() ? sector_by_mask_[mask] : npos;
    }

    const SectorBasis& sector(std::uint32_t mask) const {
        const std::size_t i = sector_index(mask);
        if (i == npos) throw std::invalid_argument("Basis: qubit configuration exceeds the excitation number");
        return sectors_[i];
    }

    /// Global index of (qubit mask, occupation state).
    std::size_t index(std::uint32_t mask, const OccupationState& occ) const {
        const SectorBasis& s = sector(mask);
        return s.offset + rank(occ, table_);
    }

    /// Sector containing a global index (sectors tile [0, dim) in order).
    const SectorBasis& sector_of(std::size_t global) const {
        if (global >= dim_) throw std::out_of_range("Basis: global index out of range");
        // binary search over offsets
        std::size_t lo = 0, hi = sectors_.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi + 1) / 2;
            if (sectors_[mid].offset <= global)
                lo = mid;
            else
                hi = mid - 1;
        }
        return sectors_[lo];
    }

    /// Decode a global index into its sector and occupation state.
    void decode(std::size_t global, const SectorBasis*& sec, OccupationState& occ) const {
        const SectorBasis& s = sector_of(global);
        sec = &s;
        unrank_into(global - s.offset, L_, s.photons, table_, occ);
    }

private:
    int n_qubits_;
    int n_exc_;
    int L_;
    BinomialTable table_;
    std::vector<SectorBasis> sectors_;
    std::vector<std::size_t> sector_by_mask_;
    std::size_t dim_ = 0;
};

}  // namespace wqed

#endif  // WQED_FOCK_BASIS_HPP
