#pragma once

#include <fism/box.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fism {

/// Features with +-1 labels.
struct LabeledDataset {
    std::vector<Vector> features;
    std::vector<int> labels;
    std::string name;

    std::size_t size() const { return labels.size(); }
    std::size_t dimension() const { return features.empty() ? 0 : features.front().size(); }
    /// Throws FormatError on length mismatch or labels outside {-1, +1}.
    void validate() const;
};

/// Unsigned-byte IDX tensor (MNIST layout).
struct IdxTensor {
    std::vector<std::uint32_t> dims;
    std::vector<std::uint8_t> values;
};

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

IdxTensor parse_idx(std::span<const std::uint8_t> bytes);
IdxTensor read_idx(const std::filesystem::path &path);
std::vector<std::uint8_t> encode_idx(const IdxTensor &tensor);
void write_idx(const std::filesystem::path &path, const IdxTensor &tensor);

/// Digit-labelled images, pixel values scaled to [0, 1].
struct DigitDataset {
    std::vector<Vector> features;
    std::vector<int> digits;
};

DigitDataset load_mnist(const std::filesystem::path &images, const std::filesystem::path &labels);

/// Keeps the two digits (pos -> +1, neg -> -1) in original order. A result
/// holding only one class is allowed; an empty one is a FormatError.
LabeledDataset filter_binary(const DigitDataset &data, int pos_digit, int neg_digit);

/// CSV with header `label,f0,...,f{n-1}`; LF or CRLF line endings.
LabeledDataset read_csv_dataset(std::istream &in, std::string name = "csv");
LabeledDataset read_csv_dataset(const std::filesystem::path &path);
void write_csv_dataset(const LabeledDataset &data, std::ostream &out);

struct SyntheticLogistic {
    LabeledDataset train;
    LabeledDataset test;
    Vector w_star;
};

/// Separable data: w* ~ N(0, I), a ~ N(0, I) resampled while
/// |<w*, a>| / ||w*|| < margin, label sign(<w*, a>), classes balanced to
/// floor(m/2) / ceil(m/2). The test set (possibly empty) shares w*.
SyntheticLogistic make_synthetic_logistic(std::size_t n, std::size_t m, double margin,
                                          std::uint64_t seed, std::size_t test_m = 0);

struct LocationInstance {
    std::vector<Vector> centers;
    std::vector<double> radii;
    Vector anchor;
    BoxConstraint box;
};

/// Centers and anchor uniform in (-10, 10)^n, radii uniform in (0, 1),
/// box [-10, 10]^n.
LocationInstance make_location_instance(std::size_t n, std::size_t m, std::uint64_t seed);

} // namespace fism
