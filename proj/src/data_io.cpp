#include <fism/data_io.hpp>
#include <fism/random.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

namespace fism {

void LabeledDataset::validate() const {
    if (features.size() != labels.size())
        throw FormatError("dataset '" + name + "': feature and label counts differ");
    const std::size_t n = dimension();
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (labels[j] != 1 && labels[j] != -1)
            throw FormatError("dataset '" + name + "': label outside {-1, +1}");
        if (features[j].size() != n)
            throw FormatError("dataset '" + name + "': ragged feature rows");
    }
}

// -- IDX --------------------------------------------------------------------

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void append_be32(std::vector<std::uint8_t> &out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::vector<std::uint8_t> slurp(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

IdxTensor parse_idx(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4)
        throw FormatError("IDX: truncated header");
    const std::uint32_t magic = read_be32(bytes, 0);
    std::size_t rank;
    if (magic == kIdxImagesMagic)
        rank = 3;
    else if (magic == kIdxLabelsMagic)
        rank = 1;
    else
        throw FormatError("IDX: unsupported magic number");

    if (bytes.size() < 4 + 4 * rank)
        throw FormatError("IDX: truncated dimensions");
    IdxTensor tensor;
    std::size_t count = 1;
    for (std::size_t r = 0; r < rank; ++r) {
        tensor.dims.push_back(read_be32(bytes, 4 + 4 * r));
        count *= tensor.dims.back();
    }
    const std::size_t offset = 4 + 4 * rank;
    if (bytes.size() - offset < count)
        throw FormatError("IDX: truncated payload");
    tensor.values.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                         bytes.begin() + static_cast<std::ptrdiff_t>(offset + count));
    return tensor;
}

IdxTensor read_idx(const std::filesystem::path &path) { return parse_idx(slurp(path)); }

std::vector<std::uint8_t> encode_idx(const IdxTensor &tensor) {
    std::uint32_t magic;
    if (tensor.dims.size() == 3)
        magic = kIdxImagesMagic;
    else if (tensor.dims.size() == 1)
        magic = kIdxLabelsMagic;
    else
        throw std::invalid_argument("IDX: only rank 1 and rank 3 tensors are supported");
    std::size_t count = 1;
    for (auto d : tensor.dims)
        count *= d;
    require(count == tensor.values.size(), "IDX: payload size does not match dims");

    std::vector<std::uint8_t> out;
    out.reserve(4 + 4 * tensor.dims.size() + count);
    append_be32(out, magic);
    for (auto d : tensor.dims)
        append_be32(out, d);
    out.insert(out.end(), tensor.values.begin(), tensor.values.end());
    return out;
}

void write_idx(const std::filesystem::path &path, const IdxTensor &tensor) {
    auto bytes = encode_idx(tensor);
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw FormatError("cannot write '" + path.string() + "'");
}

DigitDataset load_mnist(const std::filesystem::path &images, const std::filesystem::path &labels) {
    const IdxTensor img = read_idx(images);
    const IdxTensor lab = read_idx(labels);
    if (img.dims.size() != 3)
        throw FormatError("'" + images.string() + "' is not an image file");
    if (lab.dims.size() != 1)
        throw FormatError("'" + labels.string() + "' is not a label file");
    if (img.dims[0] != lab.dims[0])
        throw FormatError("image and label counts differ");

    const std::size_t count = img.dims[0];
    const std::size_t pixels = std::size_t{img.dims[1]} * img.dims[2];
    DigitDataset data;
    data.features.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vector row(pixels);
        for (std::size_t p = 0; p < pixels; ++p)
            row[p] = img.values[i * pixels + p] / 255.0;
        data.features.push_back(std::move(row));
        data.digits.push_back(lab.values[i]);
    }
    return data;
}

LabeledDataset filter_binary(const DigitDataset &data, int pos_digit, int neg_digit) {
    require(pos_digit != neg_digit, "positive and negative digits must differ");
    LabeledDataset out;
    out.name = "digits-" + std::to_string(pos_digit) + "-vs-" + std::to_string(neg_digit);
    for (std::size_t i = 0; i < data.digits.size(); ++i) {
        if (data.digits[i] == pos_digit || data.digits[i] == neg_digit) {
            out.features.push_back(data.features[i]);
            out.labels.push_back(data.digits[i] == pos_digit ? 1 : -1);
        }
    }
    if (out.size() == 0)
        throw FormatError("no samples of the requested digits");
    return out;
}

// -- CSV --------------------------------------------------------------------

namespace {

std::vector<std::string> split_fields(const std::string &line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

double parse_number(const std::string &text, std::size_t line) {
    double value = 0.0;
    const char *begin = text.data();
    const char *end = begin + text.size();
    while (begin < end && *begin == ' ')
        ++begin;
    if (begin < end && *begin == '+')
        ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    while (ptr < end && *ptr == ' ')
        ++ptr;
    if (ec != std::errc() || ptr != end)
        throw FormatError("CSV line " + std::to_string(line) + ": bad number '" + text + "'");
    return value;
}

} // namespace

LabeledDataset read_csv_dataset(std::istream &in, std::string name) {
    LabeledDataset out;
    out.name = std::move(name);
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto fields = split_fields(line);
        if (width == 0) {
            if (fields.size() < 2 || fields[0] != "label")
                throw FormatError("CSV: header must be label,f0,...");
            for (std::size_t d = 1; d < fields.size(); ++d)
                if (fields[d] != "f" + std::to_string(d - 1))
                    throw FormatError("CSV: unexpected header column '" + fields[d] + "'");
            width = fields.size();
            continue;
        }
        if (fields.size() != width)
            throw FormatError("CSV line " + std::to_string(line_no) + ": wrong field count");
        const double label = parse_number(fields[0], line_no);
        if (label != 1.0 && label != -1.0)
            throw FormatError("CSV line " + std::to_string(line_no) + ": label must be +-1");
        Vector row(width - 1);
        for (std::size_t d = 1; d < width; ++d)
            row[d - 1] = parse_number(fields[d], line_no);
        out.features.push_back(std::move(row));
        out.labels.push_back(static_cast<int>(label));
    }
    if (width == 0)
        throw FormatError("CSV: missing header");
    return out;
}

LabeledDataset read_csv_dataset(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open '" + path.string() + "'");
    return read_csv_dataset(in, path.stem().string());
}

void write_csv_dataset(const LabeledDataset &data, std::ostream &out) {
    out << "label";
    for (std::size_t d = 0; d < data.dimension(); ++d)
        out << ",f" << d;
    out << '\n' << std::setprecision(17);
    for (std::size_t j = 0; j < data.size(); ++j) {
        out << data.labels[j];
        for (double v : data.features[j])
            out << ',' << v;
        out << '\n';
    }
}

// -- generators -------------------------------------------------------------

namespace {

LabeledDataset draw_separable(const Vector &w_star, double w_norm, std::size_t count,
                              double margin, CounterRng &rng, const std::string &name) {
    LabeledDataset out;
    out.name = name;
    const std::size_t want_neg = count / 2;
    const std::size_t want_pos = count - want_neg;
    std::size_t pos = 0, neg = 0;
    const std::size_t n = w_star.size();
    while (out.size() < count) {
        Vector a(n);
        double score = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
            a[d] = rng.normal();
            score += a[d] * w_star[d];
        }
        if (std::abs(score) / w_norm < margin || score == 0.0)
            continue;
        const int label = score > 0.0 ? 1 : -1;
        if (label == 1 ? pos >= want_pos : neg >= want_neg)
            continue;
        (label == 1 ? pos : neg) += 1;
        out.features.push_back(std::move(a));
        out.labels.push_back(label);
    }
    return out;
}

} // namespace

SyntheticLogistic make_synthetic_logistic(std::size_t n, std::size_t m, double margin,
                                          std::uint64_t seed, std::size_t test_m) {
    require(n >= 1 && m >= 1, "synthetic data needs n, m >= 1");
    require(margin >= 0.0, "margin must be nonnegative");
    CounterRng rng(seed);
    SyntheticLogistic out;
    out.w_star.resize(n);
    double sq = 0.0;
    for (double &w : out.w_star) {
        w = rng.normal();
        sq += w * w;
    }
    const double w_norm = std::sqrt(sq);
    out.train = draw_separable(out.w_star, w_norm, m, margin, rng, "synthetic-train");
    out.test = draw_separable(out.w_star, w_norm, test_m, margin, rng, "synthetic-test");
    return out;
}

LocationInstance make_location_instance(std::size_t n, std::size_t m, std::uint64_t seed) {
    require(n >= 1 && m >= 1, "location instance needs n, m >= 1");
    CounterRng rng(seed);
    LocationInstance inst{{}, {}, {}, BoxConstraint::cube(n, -10.0, 10.0)};
    inst.centers.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        Vector c(n);
        for (double &v : c)
            v = rng.uniform(-10.0, 10.0);
        inst.centers.push_back(std::move(c));
        inst.radii.push_back(rng.uniform(0.0, 1.0));
    }
    inst.anchor.resize(n);
    for (double &v : inst.anchor)
        v = rng.uniform(-10.0, 10.0);
    return inst;
}

} // namespace fism
