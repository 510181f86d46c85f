#include "qsw/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace qsw {

namespace {

using nlohmann::json;

HamiltonianFile load_json(const std::filesystem::path& path, const json& doc) {
    if (!doc.contains("n_qubits") || !doc.contains("terms"))
        throw std::runtime_error(path.string() +
                                 ": missing n_qubits or terms field");
    const std::size_t n = doc.at("n_qubits").get<std::size_t>();
    HamiltonianFile file{PauliSum(n)};
    if (doc.contains("metadata")) {
        const json& md = doc.at("metadata");
        if (md.contains("convention"))
            file.metadata.convention = md.at("convention").get<std::string>();
        if (md.contains("provenance"))
            file.metadata.provenance = md.at("provenance").get<std::string>();
        if (md.contains("reference_bitstring"))
            file.metadata.reference_bitstring =
                md.at("reference_bitstring").get<std::string>();
        if (md.contains("orbital_energies"))
            file.metadata.orbital_energies =
                md.at("orbital_energies").get<std::vector<double>>();
    }
    if (file.metadata.convention != kConventionTag)
        throw std::runtime_error(path.string() + ": convention tag '" +
                                 file.metadata.convention +
                                 "' does not match workbench convention '" +
                                 kConventionTag + "'");
    if (file.metadata.reference_bitstring &&
        file.metadata.reference_bitstring->size() != n)
        throw std::runtime_error(path.string() +
                                 ": reference bitstring width mismatch");
    bool imaginary = false;
    for (const json& entry : doc.at("terms")) {
        if (!entry.is_array() || entry.size() != 3)
            throw std::runtime_error(path.string() +
                                     ": term entries must be [string, re, im]");
        const auto text = entry[0].get<std::string>();
        const double re = entry[1].get<double>();
        const double im = entry[2].get<double>();
        if (std::abs(im) > 1e-10) imaginary = true;
        PauliTerm t = parse_pauli(text, n);
        t.coeff = {re, im};
        file.sum.add_term(t);
    }
    if (imaginary)
        file.warnings.push_back(
            "non-Hermitian input: imaginary coefficient above 1e-10");
    return file;
}

HamiltonianFile load_lines(const std::filesystem::path& path,
                           std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::tuple<double, double, std::string, std::size_t>> rows;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream probe(line);
        std::string tok;
        if (!(probe >> tok)) continue;  // blank/comment line
        std::istringstream ls(line);
        double re, im;
        std::string pauli;
        if (!(ls >> re >> im >> pauli))
            throw std::runtime_error(path.string() + ":" +
                                     std::to_string(line_no) +
                                     ": expected 'coeff_re coeff_im PAULI'");
        std::string extra;
        if (ls >> extra)
            throw std::runtime_error(path.string() + ":" +
                                     std::to_string(line_no) +
                                     ": trailing content '" + extra + "'");
        if (n == 0) n = pauli.size();
        rows.emplace_back(re, im, pauli, line_no);
    }
    if (rows.empty())
        throw std::runtime_error(path.string() + ": no terms found");
    HamiltonianFile file{PauliSum(n)};
    bool imaginary = false;
    for (const auto& [re, im, pauli, row_line] : rows) {
        if (std::abs(im) > 1e-10) imaginary = true;
        try {
            PauliTerm t = parse_pauli(pauli, n);
            t.coeff = {re, im};
            file.sum.add_term(t);
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" +
                                     std::to_string(row_line) + ": " + e.what());
        }
    }
    if (imaginary)
        file.warnings.push_back(
            "non-Hermitian input: imaginary coefficient above 1e-10");
    return file;
}

}  // namespace

HamiltonianFile load_hamiltonian(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    // Sniff: JSON documents start with '{'.
    char first = 0;
    in >> std::ws;
    in.get(first);
    in.unget();
    if (first == '{') {
        json doc;
        try {
            in >> doc;
        } catch (const json::parse_error& e) {
            throw std::runtime_error(path.string() + ": " + e.what());
        }
        return load_json(path, doc);
    }
    return load_lines(path, in);
}

void save_hamiltonian(const std::filesystem::path& path, const PauliSum& sum,
                      const HamiltonianMetadata& metadata) {
    json doc;
    doc["n_qubits"] = sum.n_qubits();
    json md;
    md["convention"] = metadata.convention;
    if (!metadata.provenance.empty()) md["provenance"] = metadata.provenance;
    if (metadata.reference_bitstring)
        md["reference_bitstring"] = *metadata.reference_bitstring;
    if (metadata.orbital_energies)
        md["orbital_energies"] = *metadata.orbital_energies;
    doc["metadata"] = md;
    json terms = json::array();
    for (const auto& [key, c] : sum.terms()) {
        terms.push_back(json::array({render_pauli(PauliTerm(key.x, key.z)),
                                     c.real(), c.imag()}));
    }
    doc["terms"] = terms;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

PauliSum average_hamiltonians(const std::vector<std::filesystem::path>& paths) {
    if (paths.empty()) throw std::invalid_argument("no files to average");
    std::optional<PauliSum> acc;
    for (const auto& p : paths) {
        HamiltonianFile f = load_hamiltonian(p);
        if (!acc) {
            acc = PauliSum(f.sum.n_qubits(), f.sum.drop_tolerance());
        } else if (acc->n_qubits() != f.sum.n_qubits()) {
            throw std::runtime_error("width mismatch while averaging: " +
                                     p.string());
        }
        *acc += f.sum;
    }
    PauliSum mean(acc->n_qubits(), acc->drop_tolerance());
    const double inv = 1.0 / static_cast<double>(paths.size());
    for (const auto& [key, c] : acc->terms())
        mean.add_term(PauliTerm(key.x, key.z, c * inv));
    return mean;
}

std::vector<double> load_orbital_energies(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    in >> std::ws;
    char first = 0;
    in.get(first);
    in.unget();
    std::vector<double> out;
    if (first == '[') {
        json doc;
        in >> doc;
        out = doc.get<std::vector<double>>();
    } else {
        double v;
        while (in >> v) out.push_back(v);
    }
    return out;
}

}  // namespace qsw
