#include "dsedit/mask.hpp"

#include <algorithm>
#include <charconv>

namespace dsedit {

SelectionMask::SelectionMask(std::size_t n, bool value)
    : bits_(n, value ? 1 : 0), retained_(value ? n : 0) {}

SelectionMask::SelectionMask(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) b = b ? 1 : 0;
    retained_ = static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

void SelectionMask::set(std::size_t i, bool value) {
    const std::uint8_t v = value ? 1 : 0;
    if (bits_[i] == v) return;
    bits_[i] = v;
    if (value)
        ++retained_;
    else
        --retained_;
}

std::vector<std::size_t> SelectionMask::retained_indices() const {
    std::vector<std::size_t> out;
    out.reserve(retained_);
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) out.push_back(i);
    return out;
}

double SelectionMask::reduction_rate() const {
    if (bits_.empty()) return 0.0;
    return 1.0 - static_cast<double>(retained_) / static_cast<double>(bits_.size());
}

Dataset SelectionMask::apply(const Dataset& data) const {
    if (data.size() != bits_.size())
        throw DataError("mask of length " + std::to_string(bits_.size()) +
                        " applied to a dataset of " + std::to_string(data.size()) + " rows");
    const auto idx = retained_indices();
    return data.subset(idx);
}

std::string SelectionMask::to_bitstring() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) s[i] = '1';
    return s;
}

SelectionMask SelectionMask::from_bitstring(std::string_view bits) {
    std::vector<std::uint8_t> v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1')
            throw DataError("mask bit string contains '" + std::string(1, bits[i]) + "'");
        v[i] = bits[i] == '1' ? 1 : 0;
    }
    return SelectionMask(std::move(v));
}

std::string format_mask_line(const SelectionMask& mask) {
    return mask.to_bitstring() + ' ' + std::to_string(mask.retained_count());
}

SelectionMask parse_mask_line(std::string_view line) {
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r' || line.back() == ' '))
        line.remove_suffix(1);
    const auto space = line.find(' ');
    if (space == std::string_view::npos) throw DataError("mask line lacks a retained count");
    auto mask = SelectionMask::from_bitstring(line.substr(0, space));
    const auto count_str = line.substr(space + 1);
    std::size_t count = 0;
    auto [ptr, ec] = std::from_chars(count_str.data(), count_str.data() + count_str.size(), count);
    if (ec != std::errc() || ptr != count_str.data() + count_str.size())
        throw DataError("mask line has a malformed retained count");
    if (count != mask.retained_count())
        throw DataError("mask line declares " + std::to_string(count) + " retained rows but has " +
                        std::to_string(mask.retained_count()) + " set bits");
    return mask;
}

} // namespace dsedit
