#include "tameproj/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tameproj/errors.hpp"

namespace tameproj {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void dump_into(std::string& out, const Json& j, int indent, int depth) {
    const auto newline = [&](int level) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * level), ' ');
    };
    switch (j.type()) {
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            out += std::isfinite(x) ? format_double(x) : "null";
            break;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            out += '[';
            bool first = true;
            for (const auto& item : j) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                dump_into(out, item, indent, depth + 1);
            }
            newline(depth);
            out += ']';
            break;
        }
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += Json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                dump_into(out, it.value(), indent, depth + 1);
            }
            newline(depth);
            out += '}';
            break;
        }
        default:
            out += j.dump();
    }
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump_into(out, j, indent, 0);
    return out;
}

void write_point_set(std::ostream& out, const PointSet& ps, const Json& run) {
    Json header;
    header["field"] = std::string(to_string(ps.field()));
    header["n"] = ps.n();
    header["count"] = ps.size();
    header["provenance"] = ps.provenance();
    if (auto r = ps.truncation_radius()) {
        header["truncation_radius"] = *r;
    } else {
        header["truncation_radius"] = nullptr;
    }
    if (!run.is_null()) header["run"] = run;
    out << dump_json(header) << '\n';
    std::string line;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        line.clear();
        line += '[';
        bool first = true;
        for (double x : ps.point(i)) {
            if (!first) line += ',';
            first = false;
            line += format_double(x);
        }
        line += "]\n";
        out << line;
    }
    if (!out) throw IoError("failed writing point set");
}

void write_point_set(const std::filesystem::path& path, const PointSet& ps, const Json& run) {
    auto out = open_out(path);
    write_point_set(out, ps, run);
}

PointSet read_point_set(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("point set file is empty");
    Json header;
    try {
        header = Json::parse(line);
        const Field field = parse_field(header.at("field").get<std::string>());
        const auto n = header.at("n").get<std::size_t>();
        const auto count = header.at("count").get<std::size_t>();
        PointSet ps(field, n, header.value("provenance", std::string{}));
        if (header.contains("truncation_radius") && !header["truncation_radius"].is_null()) {
            ps.set_truncation_radius(header["truncation_radius"].get<double>());
        }
        ps.reserve(count);
        std::vector<double> coords;
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const auto arr = Json::parse(line);
            if (!arr.is_array()) throw IoError("line " + std::to_string(line_no) + " is not an array");
            coords.clear();
            for (const auto& x : arr) coords.push_back(x.get<double>());
            ps.push_back(coords);
        }
        if (ps.size() != count) {
            throw IoError("header declares " + std::to_string(count) + " points, file has " +
                          std::to_string(ps.size()));
        }
        return ps;
    } catch (const Json::exception& e) {
        throw IoError(std::string("malformed point set file: ") + e.what());
    } catch (const InvalidInput& e) {
        throw IoError(std::string("malformed point set file: ") + e.what());
    }
}

PointSet read_point_set(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_point_set(in);
}

void write_pairing_csv(std::ostream& out, const std::vector<std::size_t>& pairing) {
    out << "source_index,target_index\n";
    for (std::size_t i = 0; i < pairing.size(); ++i) out << i << ',' << pairing[i] << '\n';
}

std::vector<std::size_t> read_pairing_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "source_index,target_index") {
        throw IoError("pairing CSV must start with header 'source_index,target_index'");
    }
    std::vector<std::size_t> pairing;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError("pairing CSV row without comma: " + line);
        try {
            const auto src = std::stoull(line.substr(0, comma));
            const auto dst = std::stoull(line.substr(comma + 1));
            if (src != pairing.size()) throw IoError("pairing CSV rows must be in source order");
            pairing.push_back(dst);
        } catch (const std::logic_error&) {
            throw IoError("pairing CSV row is not numeric: " + line);
        }
    }
    return pairing;
}

void write_paired(const std::filesystem::path& prefix, const PairedPointSet& paired, const Json& run) {
    paired.validate();
    const std::string base = prefix.string();
    write_point_set(base + ".source.jsonl", paired.source, run);
    write_point_set(base + ".target.jsonl", paired.target, run);
    auto out = open_out(base + ".pairing.csv");
    write_pairing_csv(out, paired.pairing);
}

PairedPointSet read_paired(const std::filesystem::path& prefix) {
    const std::string base = prefix.string();
    PairedPointSet paired;
    paired.source = read_point_set(base + ".source.jsonl");
    paired.target = read_point_set(base + ".target.jsonl");
    auto in = open_in(base + ".pairing.csv");
    paired.pairing = read_pairing_csv(in);
    try {
        paired.validate();
    } catch (const InvalidInput& e) {
        throw IoError(std::string("inconsistent paired files: ") + e.what());
    }
    return paired;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace tameproj
