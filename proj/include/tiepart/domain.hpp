#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace tiepart {

/// Ordered finite set of integers backed by a bitset over the initial value
/// range. Values can be removed and re-inserted (for trail restoration) but
/// never fall outside the range fixed at construction.
class Domain {
public:
    Domain() = default;
    explicit Domain(std::span<const int> values);
    Domain(std::initializer_list<int> values);

    /// Domain holding every integer in [lo, hi].
    static Domain range(int lo, int hi);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    bool is_singleton() const { return size_ == 1; }
    bool contains(int value) const;

    int min() const;
    int max() const;
    /// Only meaningful when is_singleton().
    int value() const { return min(); }

    /// Values in ascending order.
    std::vector<int> values() const;

    /// Returns true if the value was present.
    bool remove(int value);
    /// Re-inserts a value inside the original range; used by trail undo.
    void restore(int value);

    template <typename F>
    void for_each(F&& f) const
    {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits != 0) {
                const int bit = __builtin_ctzll(bits);
                f(offset_ + static_cast<int>(w * 64) + bit);
                bits &= bits - 1;
            }
        }
    }

    friend bool operator==(const Domain& a, const Domain& b);

private:
    int offset_ = 0;
    int span_ = 0;
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace tiepart
