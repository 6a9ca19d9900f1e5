#include "qad/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "qad/error.hpp"
#include "qad/random.hpp"

namespace qad {

namespace {

using Record = std::vector<std::string>;

// RFC-4180 records: quoted fields may contain separators, doubled quotes and
// line breaks. Blank lines are skipped.
std::vector<Record> parse_records(const std::string& text) {
    std::vector<Record> records;
    Record current;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        current.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        if (!current.empty() || field_started || !field.empty()) {
            end_field();
            records.push_back(std::move(current));
        }
        current.clear();
    };

    std::size_t i = 0;
    if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        i = 3;
    }
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            field_started = true;
            break;
        case ',':
            end_field();
            field_started = true;
            break;
        case '\r':
            break;
        case '\n':
            end_record();
            break;
        default:
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes) {
        throw DataError("unterminated quoted field at end of file");
    }
    end_record();
    return records;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_real(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) {
        return std::nullopt;
    }
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (*begin == '+') {
        ++begin;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Dataset parse_dataset(const std::vector<Record>& records, const std::filesystem::path& path,
                      const std::optional<std::string>& label_column) {
    if (records.empty()) {
        throw DataError("'" + path.string() + "' is empty (a header row is required)");
    }
    const Record header = [&] {
        Record h;
        for (const auto& name : records.front()) {
            h.push_back(trim(name));
        }
        return h;
    }();
    const std::size_t n_rows = records.size() - 1;
    if (n_rows < 2) {
        throw DataError("'" + path.string() + "' has " + std::to_string(n_rows)
                        + " data row(s); at least 2 are required");
    }

    std::optional<std::size_t> label_index;
    if (label_column) {
        const auto it = std::find(header.begin(), header.end(), *label_column);
        if (it == header.end()) {
            throw DataError("label column \"" + *label_column + "\" not found in '"
                            + path.string() + "'");
        }
        label_index = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<std::size_t> feature_index;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != label_index) {
            feature_index.push_back(c);
        }
    }
    if (feature_index.empty()) {
        throw DataError("'" + path.string() + "' has no feature columns");
    }

    Dataset data;
    data.rows.resize(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(feature_index.size()));
    if (label_index) {
        data.labels.emplace(n_rows, 0);
    }
    for (std::size_t c : feature_index) {
        data.feature_names.push_back(header[c]);
    }

    for (std::size_t r = 0; r < n_rows; ++r) {
        const Record& rec = records[r + 1];
        const std::string where = "row " + std::to_string(r + 1) + " (line " + std::to_string(r + 2) + ")";
        if (rec.size() != header.size()) {
            throw DataError(where + ": expected " + std::to_string(header.size()) + " fields, found "
                            + std::to_string(rec.size()));
        }
        for (std::size_t f = 0; f < feature_index.size(); ++f) {
            const std::size_t c = feature_index[f];
            const auto value = parse_real(rec[c]);
            if (!value) {
                throw DataError(where + ", column \"" + header[c] + "\": cannot parse \"" + rec[c]
                                + "\" as a finite real");
            }
            data.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(f)) = *value;
        }
        if (label_index) {
            const auto value = parse_real(rec[*label_index]);
            if (!value || (*value != 0.0 && *value != 1.0)) {
                throw DataError(where + ", column \"" + header[*label_index] + "\": label \""
                                + rec[*label_index] + "\" is not 0 or 1");
            }
            (*data.labels)[r] = *value == 1.0 ? 1 : 0;
        }
    }

    data.ids.reserve(n_rows);
    for (std::size_t r = 0; r < n_rows; ++r) {
        data.ids.push_back(std::to_string(r));
    }
    data.validate();
    return data;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

} // namespace

std::size_t Dataset::outlier_count() const {
    if (!labels) {
        throw InvalidArgument("data set is unlabeled");
    }
    return static_cast<std::size_t>(std::count(labels->begin(), labels->end(), std::uint8_t{1}));
}

void Dataset::validate() const {
    if (rows.rows() < 2) {
        throw InvalidArgument("data set needs at least 2 rows, got " + std::to_string(rows.rows()));
    }
    if (rows.cols() < 1) {
        throw InvalidArgument("data set needs at least 1 feature column");
    }
    if (!rows.allFinite()) {
        throw InvalidArgument("data set contains NaN or infinite values");
    }
    if (labels) {
        if (labels->size() != size()) {
            throw InvalidArgument("label count " + std::to_string(labels->size())
                                  + " does not match row count " + std::to_string(size()));
        }
        for (auto v : *labels) {
            if (v > 1) {
                throw InvalidArgument("labels must be 0 or 1");
            }
        }
    }
    if (ids.size() != size()) {
        throw InvalidArgument("id count does not match row count");
    }
    if (!feature_names.empty() && feature_names.size() != dims()) {
        throw InvalidArgument("feature name count does not match column count");
    }
}

Dataset make_dataset(Eigen::MatrixXd rows, std::optional<Labels> labels) {
    Dataset data;
    data.rows = std::move(rows);
    data.labels = std::move(labels);
    for (Eigen::Index r = 0; r < data.rows.rows(); ++r) {
        data.ids.push_back(std::to_string(r));
    }
    for (Eigen::Index c = 0; c < data.rows.cols(); ++c) {
        data.feature_names.push_back("x" + std::to_string(c));
    }
    data.validate();
    return data;
}

void GaussianSpec::validate() const {
    if (n_inliers < 1) {
        throw InvalidArgument("n_inliers must be at least 1");
    }
    if (dims < 1) {
        throw InvalidArgument("dims must be at least 1");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidArgument("sigma must be positive and finite");
    }
    if (!(outlier_shift >= 0.0) || !std::isfinite(outlier_shift)) {
        throw InvalidArgument("outlier_shift must be non-negative and finite");
    }
    if (n_inliers + n_outliers < 2) {
        throw InvalidArgument("a data set needs at least 2 rows");
    }
}

Dataset generate_gaussian(const GaussianSpec& spec) {
    spec.validate();
    const auto n = static_cast<Eigen::Index>(spec.n_inliers + spec.n_outliers);
    const auto d = static_cast<Eigen::Index>(spec.dims);
    Eigen::MatrixXd rows(n, d);
    Labels labels(static_cast<std::size_t>(n), 0);
    Rng rng(spec.seed);

    const auto n_in = static_cast<Eigen::Index>(spec.n_inliers);
    for (Eigen::Index i = 0; i < n_in; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            rows(i, j) = spec.sigma * rng.normal();
        }
    }
    const double radius = spec.outlier_shift * spec.sigma;
    for (Eigen::Index i = n_in; i < n; ++i) {
        Eigen::VectorXd dir(d);
        double norm = 0.0;
        while (norm < 1e-8) {
            for (Eigen::Index j = 0; j < d; ++j) {
                dir(j) = rng.normal();
            }
            norm = dir.norm();
        }
        rows.row(i) = (radius / norm) * dir.transpose();
        labels[static_cast<std::size_t>(i)] = 1;
    }
    return make_dataset(std::move(rows), std::move(labels));
}

Dataset load_csv(const std::filesystem::path& path, const std::optional<std::string>& label_column) {
    return parse_dataset(parse_records(read_file(path)), path, label_column);
}

Dataset load_csv_if_labeled(const std::filesystem::path& path, const std::string& label_column) {
    const auto records = parse_records(read_file(path));
    std::optional<std::string> label;
    if (!records.empty()) {
        for (const auto& name : records.front()) {
            if (trim(name) == label_column) {
                label = label_column;
            }
        }
    }
    return parse_dataset(records, path, label);
}

void write_csv(const Dataset& data, std::ostream& out, const std::string& label_column) {
    std::vector<std::string> names = data.feature_names;
    if (names.size() != data.dims()) {
        names.clear();
        for (std::size_t c = 0; c < data.dims(); ++c) {
            names.push_back("x" + std::to_string(c));
        }
    }
    for (std::size_t c = 0; c < names.size(); ++c) {
        out << (c ? "," : "") << csv_escape(names[c]);
    }
    if (data.labels) {
        out << ',' << csv_escape(label_column);
    }
    out << '\n';
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    for (Eigen::Index r = 0; r < data.rows.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.rows.cols(); ++c) {
            out << (c ? "," : "") << data.rows(r, c);
        }
        if (data.labels) {
            out << ',' << static_cast<int>((*data.labels)[static_cast<std::size_t>(r)]);
        }
        out << '\n';
    }
    out.precision(old_precision);
}

void write_csv(const Dataset& data, const std::filesystem::path& path, const std::string& label_column) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write '" + path.string() + "'");
    }
    write_csv(data, out, label_column);
    if (!out) {
        throw DataError("failed writing '" + path.string() + "'");
    }
}

Dataset subsample_stratified(const Dataset& data, std::size_t target_rows, std::uint64_t seed) {
    if (target_rows < 2) {
        throw InvalidArgument("subsample size must be at least 2");
    }
    if (target_rows >= data.size()) {
        return data;
    }
    Rng rng(seed);
    // Partial Fisher-Yates: the first `take` entries become a uniform sample.
    auto sample = [&rng](std::vector<std::size_t> pool, std::size_t take) {
        for (std::size_t i = 0; i < take; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(take);
        return pool;
    };

    std::vector<std::size_t> chosen;
    if (data.labels) {
        std::vector<std::size_t> pos;
        std::vector<std::size_t> neg;
        for (std::size_t i = 0; i < data.size(); ++i) {
            ((*data.labels)[i] ? pos : neg).push_back(i);
        }
        const double ratio = static_cast<double>(pos.size()) / static_cast<double>(data.size());
        auto take_pos = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(target_rows)));
        if (!pos.empty()) {
            take_pos = std::max<std::size_t>(take_pos, 1);
        }
        if (!neg.empty()) {
            take_pos = std::min(take_pos, target_rows - 1);
        }
        take_pos = std::min(take_pos, pos.size());
        const std::size_t take_neg = std::min(target_rows - take_pos, neg.size());
        chosen = sample(std::move(pos), take_pos);
        const auto negatives = sample(std::move(neg), take_neg);
        chosen.insert(chosen.end(), negatives.begin(), negatives.end());
    } else {
        std::vector<std::size_t> all(data.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        chosen = sample(std::move(all), target_rows);
    }
    std::sort(chosen.begin(), chosen.end());

    Dataset out;
    out.rows.resize(static_cast<Eigen::Index>(chosen.size()), data.rows.cols());
    if (data.labels) {
        out.labels.emplace();
    }
    for (std::size_t r = 0; r < chosen.size(); ++r) {
        out.rows.row(static_cast<Eigen::Index>(r)) = data.rows.row(static_cast<Eigen::Index>(chosen[r]));
        out.ids.push_back(data.ids[chosen[r]]);
        if (data.labels) {
            out.labels->push_back((*data.labels)[chosen[r]]);
        }
    }
    out.feature_names = data.feature_names;
    out.validate();
    return out;
}

} // namespace qad
