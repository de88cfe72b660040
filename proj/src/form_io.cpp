#include "hlsum/form_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace hlsum {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw std::invalid_argument("form file field \"" + field + "\": " + why);
}

int require_positive_int(const nlohmann::json& doc, const char* field) {
    if (!doc.contains(field)) bad_field(field, "missing");
    const auto& v = doc.at(field);
    if (!v.is_number_integer()) bad_field(field, "must be an integer");
    const std::int64_t value = v.get<std::int64_t>();
    if (value < 1) bad_field(field, "must be >= 1");
    if (value > 1'000'000'000) bad_field(field, "implausibly large");
    return static_cast<int>(value);
}

double require_finite_number(const nlohmann::json& v, const char* field) {
    if (!v.is_number()) bad_field(field, "coefficient values must be numbers");
    const double value = v.get<double>();
    if (!std::isfinite(value)) bad_field(field, "coefficient values must be finite");
    return value;
}

}  // namespace

MultilinearForm read_form_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        // covers syntax errors and numeric overflow (the strict-JSON route to
        // a non-finite coefficient)
        throw std::invalid_argument(std::string("form file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("form file must be a JSON object");

    if (doc.contains("scalar")) {
        const auto& scalar = doc.at("scalar");
        if (!scalar.is_string() || scalar.get<std::string>() != "real") {
            bad_field("scalar", "only \"real\" is supported");
        }
    }

    const int m = require_positive_int(doc, "m");
    const int n = require_positive_int(doc, "n");
    if (m > 64) bad_field("m", "degree exceeds 64");

    if (!doc.contains("storage")) bad_field("storage", "missing");
    const auto& storage = doc.at("storage");
    if (!storage.is_string()) bad_field("storage", "must be \"dense\" or \"sparse\"");
    const std::string kind = storage.get<std::string>();

    if (kind == "dense") {
        const std::int64_t size = MultilinearForm::checked_dense_size(m, n);
        if (!doc.contains("coefficients")) bad_field("coefficients", "missing");
        const auto& coeffs = doc.at("coefficients");
        if (!coeffs.is_array()) bad_field("coefficients", "must be an array");
        if (coeffs.size() != static_cast<std::size_t>(size)) {
            bad_field("coefficients", "length " + std::to_string(coeffs.size()) +
                                          " does not equal n^m = " + std::to_string(size));
        }
        std::vector<double> values;
        values.reserve(coeffs.size());
        for (const auto& v : coeffs) values.push_back(require_finite_number(v, "coefficients"));
        return MultilinearForm::dense(m, n, std::move(values));
    }

    if (kind == "sparse") {
        if (!doc.contains("entries")) bad_field("entries", "missing");
        const auto& entries = doc.at("entries");
        if (!entries.is_array()) bad_field("entries", "must be an array");

        auto table = std::make_shared<std::unordered_map<std::int64_t, double>>();
        table->reserve(entries.size());
        for (const auto& entry : entries) {
            if (!entry.is_array() || entry.size() != static_cast<std::size_t>(m) + 1) {
                bad_field("entries", "each entry must be [j1, ..., jm, value]");
            }
            std::int64_t flat = 0;
            for (int l = 0; l < m; ++l) {
                const auto& j = entry.at(static_cast<std::size_t>(l));
                if (!j.is_number_integer()) bad_field("entries", "indices must be integers");
                const std::int64_t idx = j.get<std::int64_t>();
                if (idx < 1 || idx > n) {
                    bad_field("entries", "index " + std::to_string(idx) +
                                             " out of range [1, " + std::to_string(n) + "]");
                }
                flat = flat * n + (idx - 1);
            }
            const double value = require_finite_number(entry.at(static_cast<std::size_t>(m)), "entries");
            if (!table->emplace(flat, value).second) {
                bad_field("entries", "duplicate multi-index");
            }
        }
        const int dim = n;
        return MultilinearForm::procedural(
            m, n, [table, dim](std::span<const int> index) {
                std::int64_t flat = 0;
                for (int component : index) flat = flat * dim + component;
                const auto it = table->find(flat);
                return it == table->end() ? 0.0 : it->second;
            });
    }

    bad_field("storage", "unknown storage kind \"" + kind + "\"");
}

MultilinearForm load_form(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open form file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return read_form_json(buffer.str());
}

std::string form_to_json(const MultilinearForm& form, bool sparse) {
    const int m = form.degree();
    const int n = form.dim();
    ordered_json doc;
    doc["m"] = m;
    doc["n"] = n;
    doc["scalar"] = "real";

    if (!sparse) {
        MultilinearForm::checked_dense_size(m, n);
        ordered_json coeffs = ordered_json::array();
        std::vector<int> index(static_cast<std::size_t>(m), 0);
        do {
            coeffs.push_back(form.coefficient_unchecked(index));
        } while (detail::increment_index(index, n));
        doc["storage"] = "dense";
        doc["coefficients"] = std::move(coeffs);
        return doc.dump(2);
    }

    MultilinearForm::checked_dense_size(m, n);  // sparse export still scans n^m indices
    ordered_json entries = ordered_json::array();
    std::vector<int> index(static_cast<std::size_t>(m), 0);
    do {
        const double value = form.coefficient_unchecked(index);
        if (value != 0.0) {
            ordered_json entry = ordered_json::array();
            for (int component : index) entry.push_back(component + 1);
            entry.push_back(value);
            entries.push_back(std::move(entry));
        }
    } while (detail::increment_index(index, n));
    doc["storage"] = "sparse";
    doc["entries"] = std::move(entries);
    return doc.dump(2);
}

void save_form(const MultilinearForm& form, const std::string& path, bool sparse) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write form file '" + path + "'");
    out << form_to_json(form, sparse) << '\n';
}

}  // namespace hlsum
