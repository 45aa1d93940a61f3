#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "qnva/errors.hpp"

namespace qnva {

/// Cell alphabet of verification and proof material. Measured bit sequences
/// contain only Zero/One; proof sequences may additionally hold Cryptic
/// cells, and only as whole tuples of them.
enum class Symbol : std::uint8_t { Zero = 0, One = 1, Cryptic = 2 };

inline Symbol symbol_from_bit(bool bit) { return bit ? Symbol::One : Symbol::Zero; }

inline bool symbol_is_bit(Symbol s) { return s != Symbol::Cryptic; }

inline char symbol_char(Symbol s) {
    switch (s) {
        case Symbol::Zero: return '0';
        case Symbol::One: return '1';
        default: return '*';
    }
}

inline Symbol symbol_from_char(char c) {
    switch (c) {
        case '0': return Symbol::Zero;
        case '1': return Symbol::One;
        case '*': return Symbol::Cryptic;
        default: throw std::invalid_argument(std::string("unknown symbol character: ") + c);
    }
}

/// A (d, n) grid of symbols: `degree` (d) tuples, each `width` (n) cells.
///
/// Cell (k, l) is position k within tuple l; both indices are 1-based and
/// tuples are enumerated ascending l = 1..d. Position k is owned by
/// aggregator k: a verifier's bit sequence is correlated with aggregator k's
/// sequence exactly at that position. The container itself accepts any
/// positive degree; divisibility requirements live at scenario level.
///
/// Instances are immutable once constructed by the producing code path and
/// may be shared freely across concurrent trial workers.
class TupleSequence {
public:
    TupleSequence(int degree, int width, Symbol fill = Symbol::Zero)
        : degree_(degree), width_(width) {
        if (degree <= 0 || width <= 0) {
            throw std::invalid_argument("TupleSequence: degree and width must be positive");
        }
        cells_.assign(static_cast<std::size_t>(degree) * static_cast<std::size_t>(width), fill);
    }

    int degree() const { return degree_; }
    int width() const { return width_; }

    Symbol at(int position, int tuple) const { return cells_[index(position, tuple)]; }

    void set(int position, int tuple, Symbol s) { cells_[index(position, tuple)] = s; }

    void set_bit(int position, int tuple, bool bit) { set(position, tuple, symbol_from_bit(bit)); }

    bool tuple_is_cryptic(int tuple) const {
        for (int k = 1; k <= width_; ++k) {
            if (at(k, tuple) != Symbol::Cryptic) return false;
        }
        return true;
    }

    bool tuple_is_revealed(int tuple) const {
        for (int k = 1; k <= width_; ++k) {
            if (at(k, tuple) == Symbol::Cryptic) return false;
        }
        return true;
    }

    /// True when no cell is cryptic (a measured bit sequence).
    bool is_bit_sequence() const {
        return std::none_of(cells_.begin(), cells_.end(),
                            [](Symbol s) { return s == Symbol::Cryptic; });
    }

    /// True when every tuple is either fully revealed or fully cryptic.
    /// Mixed tuples are representable (so adversaries can emit them) but are
    /// rejected by every consumer of proof sequences.
    bool is_valid_proof() const {
        for (int l = 1; l <= degree_; ++l) {
            if (!tuple_is_revealed(l) && !tuple_is_cryptic(l)) return false;
        }
        return true;
    }

    void set_tuple_cryptic(int tuple) {
        for (int k = 1; k <= width_; ++k) set(k, tuple, Symbol::Cryptic);
    }

    void copy_tuple_from(const TupleSequence& src, int tuple) {
        if (src.width_ != width_) {
            throw std::invalid_argument("copy_tuple_from: width mismatch");
        }
        for (int k = 1; k <= width_; ++k) set(k, tuple, src.at(k, tuple));
    }

    bool same_shape(const TupleSequence& other) const {
        return degree_ == other.degree_ && width_ == other.width_;
    }

    /// Compact text form: one token per tuple, cells '0'/'1'/'*' with
    /// position k = 1..n left to right inside a token, tuples space-separated
    /// ascending l = 1..d. Used for logs, digests and golden tests.
    std::string to_text() const {
        std::string out;
        out.reserve(cells_.size() + static_cast<std::size_t>(degree_));
        for (int l = 1; l <= degree_; ++l) {
            if (l > 1) out.push_back(' ');
            for (int k = 1; k <= width_; ++k) out.push_back(symbol_char(at(k, l)));
        }
        return out;
    }

    static TupleSequence from_text(const std::string& text) {
        std::istringstream in(text);
        std::vector<std::string> tokens;
        std::string token;
        while (in >> token) tokens.push_back(token);
        if (tokens.empty()) {
            throw std::invalid_argument("TupleSequence::from_text: no tuples");
        }
        const int width = static_cast<int>(tokens.front().size());
        TupleSequence seq(static_cast<int>(tokens.size()), width);
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (static_cast<int>(tokens[i].size()) != width) {
                throw std::invalid_argument("TupleSequence::from_text: ragged tuple width");
            }
            for (int k = 1; k <= width; ++k) {
                seq.set(k, static_cast<int>(i) + 1, symbol_from_char(tokens[i][k - 1]));
            }
        }
        return seq;
    }

    friend bool operator==(const TupleSequence&, const TupleSequence&) = default;

private:
    std::size_t index(int position, int tuple) const {
        if (position < 1 || position > width_) {
            throw std::invalid_argument("TupleSequence: position out of range");
        }
        if (tuple < 1 || tuple > degree_) {
            throw std::invalid_argument("TupleSequence: tuple index out of range");
        }
        return static_cast<std::size_t>(tuple - 1) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(position - 1);
    }

    int degree_;
    int width_;
    std::vector<Symbol> cells_;
};

/// A set of tuple indices l in {1..d}, stored sorted and duplicate-free.
class IndexSet {
public:
    IndexSet() = default;

    IndexSet(std::initializer_list<int> values) : members_(values) { normalize(); }

    explicit IndexSet(std::vector<int> values) : members_(std::move(values)) { normalize(); }

    /// Fast path for producers that emit ascending indices.
    static IndexSet from_sorted(std::vector<int> values) {
        IndexSet s;
        s.members_ = std::move(values);
        return s;
    }

    bool contains(int value) const {
        return std::binary_search(members_.begin(), members_.end(), value);
    }

    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

    const std::vector<int>& values() const { return members_; }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    void normalize() {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    }

    std::vector<int> members_;
};

inline std::size_t symmetric_difference_size(const IndexSet& a, const IndexSet& b) {
    std::vector<int> diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(diff));
    return diff.size();
}

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return IndexSet::from_sorted(std::move(out));
}

inline IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return IndexSet::from_sorted(std::move(out));
}

namespace detail {
inline void check_position(const TupleSequence& seq, int position, const char* fn) {
    if (position < 1 || position > seq.width()) {
        throw std::invalid_argument(std::string(fn) + ": position out of range");
    }
}
}  // namespace detail

/// Indices of tuples whose cell at `position` holds the bit `value`.
/// Cryptic cells never match.
inline IndexSet positions_with(const TupleSequence& seq, int position, bool value) {
    detail::check_position(seq, position, "positions_with");
    const Symbol wanted = symbol_from_bit(value);
    std::vector<int> out;
    for (int l = 1; l <= seq.degree(); ++l) {
        if (seq.at(position, l) == wanted) out.push_back(l);
    }
    return IndexSet::from_sorted(std::move(out));
}

/// Indices of tuples holding `value_a` at `position_a` and `value_b` at
/// `position_b`; the two positions must differ.
inline IndexSet positions_with_pair(const TupleSequence& seq, int position_a, int position_b,
                                    bool value_a, bool value_b) {
    detail::check_position(seq, position_a, "positions_with_pair");
    detail::check_position(seq, position_b, "positions_with_pair");
    if (position_a == position_b) {
        throw std::invalid_argument("positions_with_pair: positions must differ");
    }
    const Symbol wanted_a = symbol_from_bit(value_a);
    const Symbol wanted_b = symbol_from_bit(value_b);
    std::vector<int> out;
    for (int l = 1; l <= seq.degree(); ++l) {
        if (seq.at(position_a, l) == wanted_a && seq.at(position_b, l) == wanted_b) {
            out.push_back(l);
        }
    }
    return IndexSet::from_sorted(std::move(out));
}

/// Indices of fully cryptic tuples. Throws MalformedSequence if any tuple is
/// partially cryptic.
inline IndexSet cryptic_positions(const TupleSequence& seq) {
    std::vector<int> out;
    for (int l = 1; l <= seq.degree(); ++l) {
        if (seq.tuple_is_cryptic(l)) {
            out.push_back(l);
        } else if (!seq.tuple_is_revealed(l)) {
            throw MalformedSequence("cryptic_positions: tuple " + std::to_string(l) +
                                    " is partially cryptic");
        }
    }
    return IndexSet::from_sorted(std::move(out));
}

}  // namespace qnva
