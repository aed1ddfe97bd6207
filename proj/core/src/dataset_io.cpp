#include "mqsr/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "mqsr/errors.hpp"

namespace mqsr::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_decimal(double value) {
    char buf[64];
    // std::to_chars keeps the '.' radix regardless of the global locale.
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_decimal(const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw DataError("malformed decimal '" + text + "'");
    }
    return value;
}

void write_text_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

std::vector<std::vector<double>> parse_csv(const fs::path& path) {
    const std::string text = read_text_file(path);
    std::vector<std::vector<double>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string cell = line.substr(start, comma - start);
            try {
                row.push_back(parse_decimal(cell));
            } catch (const DataError& e) {
                throw DataError(path.string() + ": " + e.what());
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

void write_dataset(const MixedDataset& ds, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

    json meta;
    meta["p"] = ds.p();
    meta["n1"] = ds.noise.n1;
    meta["n2"] = ds.noise.n2;
    meta["sigma1_sq"] = ds.noise.sigma1_sq;
    meta["sigma2_sq"] = ds.noise.sigma2_sq;
    meta["seed"] = ds.seed;
    if (ds.truth) {
        meta["s"] = ds.truth->sparsity();
        json support = json::array();
        for (std::size_t j : ds.truth->support()) support.push_back(j + 1);
        meta["support"] = support;
        meta["values"] = ds.truth->values();
    } else {
        meta["s"] = nullptr;
        meta["support"] = nullptr;
        meta["values"] = nullptr;
    }
    write_text_file(dir / "meta.json", meta.dump(2) + "\n");

    std::string x;
    x.reserve(ds.n() * ds.p() * 24);
    for (Eigen::Index i = 0; i < ds.design.rows(); ++i) {
        for (Eigen::Index j = 0; j < ds.design.cols(); ++j) {
            if (j) x += ',';
            x += format_decimal(ds.design(i, j));
        }
        x += '\n';
    }
    write_text_file(dir / "X.csv", x);

    std::string y;
    for (Eigen::Index i = 0; i < ds.observations.size(); ++i) {
        y += format_decimal(ds.observations(i));
        y += '\n';
    }
    write_text_file(dir / "Y.csv", y);
}

MixedDataset read_dataset(const fs::path& dir) {
    json meta;
    try {
        meta = json::parse(read_text_file(dir / "meta.json"));
    } catch (const json::exception& e) {
        throw DataError((dir / "meta.json").string() + ": " + e.what());
    }

    MixedDataset ds;
    try {
        ds.noise.n1 = meta.at("n1").get<std::size_t>();
        ds.noise.n2 = meta.at("n2").get<std::size_t>();
        ds.noise.sigma1_sq = meta.at("sigma1_sq").get<double>();
        ds.noise.sigma2_sq = meta.at("sigma2_sq").get<double>();
        ds.seed = meta.value("seed", std::uint64_t{0});
        const auto p = meta.at("p").get<std::size_t>();
        if (meta.contains("support") && !meta["support"].is_null()) {
            std::vector<std::size_t> support;
            for (const auto& v : meta["support"]) {
                const auto one_based = v.get<std::size_t>();
                if (one_based == 0) throw DomainError("meta.json support indices are 1-based");
                support.push_back(one_based - 1);
            }
            ds.truth = SparseSignal::make(p, std::move(support),
                                          meta.at("values").get<std::vector<double>>());
        }
        const auto xs = parse_csv(dir / "X.csv");
        const auto ys = parse_csv(dir / "Y.csv");
        const std::size_t n = ds.noise.n();
        if (xs.size() != n || ys.size() != n) {
            throw DataError(dir.string() + ": row counts of X.csv/Y.csv differ from n1 + n2");
        }
        ds.design.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
        ds.observations.resize(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (xs[i].size() != p) {
                throw DataError((dir / "X.csv").string() + ": row " + std::to_string(i + 1) +
                                " does not have p columns");
            }
            if (ys[i].size() != 1) {
                throw DataError((dir / "Y.csv").string() + ": row " + std::to_string(i + 1) +
                                " must have exactly one column");
            }
            for (std::size_t j = 0; j < p; ++j) {
                ds.design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = xs[i][j];
            }
            ds.observations(static_cast<Eigen::Index>(i)) = ys[i][0];
        }
    } catch (const json::exception& e) {
        throw DataError((dir / "meta.json").string() + ": " + e.what());
    }
    ds.noise.validate();
    return ds;
}

}  // namespace mqsr::io
