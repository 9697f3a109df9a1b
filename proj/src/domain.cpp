#include "tiepart/domain.hpp"

#include <algorithm>
#include <stdexcept>

namespace tiepart {

Domain::Domain(std::span<const int> values)
{
    if (values.empty())
        return;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    offset_ = *lo;
    span_ = *hi - *lo + 1;
    words_.assign(static_cast<std::size_t>(span_ + 63) / 64, 0);
    for (int v : values) {
        if (!contains(v)) {
            const int idx = v - offset_;
            words_[idx / 64] |= std::uint64_t{1} << (idx % 64);
            ++size_;
        }
    }
}

Domain::Domain(std::initializer_list<int> values) :
    Domain(std::span<const int>(values.begin(), values.size()))
{
}

Domain Domain::range(int lo, int hi)
{
    if (hi < lo)
        return Domain{};
    std::vector<int> vals(static_cast<std::size_t>(hi - lo + 1));
    for (int v = lo; v <= hi; ++v)
        vals[static_cast<std::size_t>(v - lo)] = v;
    return Domain(vals);
}

bool Domain::contains(int value) const
{
    const int idx = value - offset_;
    if (idx < 0 || idx >= span_)
        return false;
    return (words_[idx / 64] >> (idx % 64)) & 1U;
}

int Domain::min() const
{
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w] != 0)
            return offset_ + static_cast<int>(w * 64) + __builtin_ctzll(words_[w]);
    throw std::logic_error("min() of empty domain");
}

int Domain::max() const
{
    for (std::size_t w = words_.size(); w-- > 0;)
        if (words_[w] != 0)
            return offset_ + static_cast<int>(w * 64) + 63 - __builtin_clzll(words_[w]);
    throw std::logic_error("max() of empty domain");
}

std::vector<int> Domain::values() const
{
    std::vector<int> out;
    out.reserve(size_);
    for_each([&](int v) { out.push_back(v); });
    return out;
}

bool Domain::remove(int value)
{
    if (!contains(value))
        return false;
    const int idx = value - offset_;
    words_[idx / 64] &= ~(std::uint64_t{1} << (idx % 64));
    --size_;
    return true;
}

void Domain::restore(int value)
{
    const int idx = value - offset_;
    if (idx < 0 || idx >= span_)
        throw std::out_of_range("restore() outside the original domain range");
    if (contains(value))
        return;
    words_[idx / 64] |= std::uint64_t{1} << (idx % 64);
    ++size_;
}

bool operator==(const Domain& a, const Domain& b)
{
    if (a.size_ != b.size_)
        return false;
    bool same = true;
    a.for_each([&](int v) { same = same && b.contains(v); });
    return same;
}

} // namespace tiepart
