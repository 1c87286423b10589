#pragma once

#include "dsedit/dataset.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dsedit {

/// Which rows of the dynamic-selection set survive an edit. Applying the mask
/// keeps the surviving rows in their original order.
class SelectionMask {
public:
    SelectionMask() = default;
    explicit SelectionMask(std::size_t n, bool value = true);
    explicit SelectionMask(std::vector<std::uint8_t> bits);

    static SelectionMask full(std::size_t n) { return SelectionMask(n, true); }

    std::size_t size() const noexcept { return bits_.size(); }
    std::size_t retained_count() const noexcept { return retained_; }
    bool empty_selection() const noexcept { return retained_ == 0; }

    bool test(std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool value);
    void flip(std::size_t i) { set(i, !test(i)); }

    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
    std::vector<std::size_t> retained_indices() const;

    /// 1 - retained / N.
    double reduction_rate() const;

    Dataset apply(const Dataset& data) const;

    /// '0'/'1' characters, one per row.
    std::string to_bitstring() const;
    static SelectionMask from_bitstring(std::string_view bits);

    friend bool operator==(const SelectionMask& a, const SelectionMask& b) { return a.bits_ == b.bits_; }

private:
    std::vector<std::uint8_t> bits_;
    std::size_t retained_ = 0;
};

/// Mask file: "<bitstring> <retained_count>" on one line.
std::string format_mask_line(const SelectionMask& mask);
SelectionMask parse_mask_line(std::string_view line);

} // namespace dsedit
