#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "qsw/contextual.hpp"
#include "qsw/exact.hpp"
#include "qsw/io.hpp"
#include "qsw/pauli.hpp"
#include "qsw/pipeline.hpp"
#include "qsw/projection.hpp"
#include "qsw/qsci.hpp"
#include "qsw/tapering.hpp"

namespace {

using nlohmann::json;
using namespace qsw;

struct GlobalOptions {
    std::uint64_t seed = 1;
    double tolerance = kDefaultDropTolerance;
    std::string output_format = "json";
};

PauliSum with_tolerance(const PauliSum& in, double tol) {
    if (tol == in.drop_tolerance()) return in;
    PauliSum out(in.n_qubits(), tol);
    for (const auto& [key, c] : in.terms())
        out.add_term(PauliTerm(key.x, key.z, c));
    return out;
}

HamiltonianFile load_input(const std::string& path, const GlobalOptions& g) {
    HamiltonianFile file = load_hamiltonian(path);
    for (const auto& w : file.warnings) std::cerr << "warning: " << w << "\n";
    file.sum = with_tolerance(file.sum, g.tolerance);
    return file;
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

std::vector<std::size_t> parse_index_list(const std::string& csv) {
    std::vector<std::size_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoul(item));
    }
    return out;
}

json model_report(const PauliSum& H) {
    const auto structure = analyze_commutation_structure(H.term_list());
    json doc;
    doc["noncontextual"] = structure.noncontextual;
    json sym = json::array();
    for (const auto& t : structure.symmetry_component)
        sym.push_back(render_pauli(t));
    doc["symmetry_component"] = sym;
    if (structure.noncontextual) {
        json cliques = json::array();
        for (const auto& clique : structure.cliques) {
            json c = json::array();
            for (const auto& t : clique) c.push_back(render_pauli(t));
            cliques.push_back(std::move(c));
        }
        doc["cliques"] = cliques;
    }
    return doc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qubit-subspace workbench: Hamiltonian reduction and "
                 "subspace solvers"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--seed", global.seed, "RNG seed for sampling stages");
    app.add_option("--tolerance", global.tolerance,
                   "coefficient drop tolerance");
    app.add_option("--output", global.output_format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));

    // info
    std::string info_input;
    auto* info = app.add_subcommand("info", "describe a Hamiltonian file");
    info->add_option("input", info_input)->required();

    // freeze
    std::string freeze_input, freeze_out, freeze_occ, freeze_virt,
        freeze_energies;
    double freeze_threshold = 0.0;
    bool freeze_has_threshold = false;
    auto* freeze_cmd =
        app.add_subcommand("freeze", "frozen-core/virtual projection");
    freeze_cmd->add_option("input", freeze_input)->required();
    freeze_cmd->add_option("-o,--out", freeze_out, "output Hamiltonian file")
        ->required();
    freeze_cmd->add_option("--occupied", freeze_occ,
                           "comma-separated occupied qubits");
    freeze_cmd->add_option("--virtual", freeze_virt,
                           "comma-separated virtual qubits");
    freeze_cmd->add_option("--orbital-energies", freeze_energies,
                           "orbital energy file");
    freeze_cmd
        ->add_option("--threshold", freeze_threshold,
                     "freeze orbitals with energy below -threshold")
        ->each([&](const std::string&) { freeze_has_threshold = true; });

    // taper
    std::string taper_input, taper_out, taper_reference = "auto", taper_sector;
    bool taper_scan = false;
    auto* taper_cmd = app.add_subcommand("taper", "Z2 symmetry tapering");
    taper_cmd->add_option("input", taper_input)->required();
    taper_cmd->add_option("-o,--out", taper_out, "output Hamiltonian file");
    taper_cmd->add_option("--reference", taper_reference,
                          "reference bitstring or 'auto' (file metadata)");
    taper_cmd->add_option("--sector", taper_sector,
                          "explicit sector, e.g. 1,-1,1");
    taper_cmd->add_flag("--scan", taper_scan,
                        "scan all sectors, keep the lowest ground energy");

    // contextual
    std::string ctx_input, ctx_out, ctx_sweep_csv, ctx_subset_mode = "greedy";
    int ctx_target = -1;
    auto* ctx_cmd =
        app.add_subcommand("contextual", "contextual-subspace projection");
    ctx_cmd->add_option("input", ctx_input)->required();
    ctx_cmd->add_option("-o,--out", ctx_out, "output Hamiltonian file");
    ctx_cmd->add_option("--target-qubits", ctx_target, "projected width");
    ctx_cmd->add_option("--sweep", ctx_sweep_csv,
                        "write the expanding-subspace sweep CSV here");
    ctx_cmd->add_option("--subset-mode", ctx_subset_mode)
        ->check(CLI::IsMember({"greedy", "brute"}));

    // qsci
    std::string qsci_input, qsci_samples;
    std::size_t qsci_shots = 100000;
    double qsci_noise = 0.0;
    int qsci_filter = -1;
    int qsci_max_k = -1;
    auto* qsci_cmd = app.add_subcommand(
        "qsci", "sample configurations and diagonalize the projected matrix");
    qsci_cmd->add_option("input", qsci_input)->required();
    qsci_cmd->add_option("--shots", qsci_shots);
    qsci_cmd->add_option("--noise", qsci_noise, "bit-flip probability per bit");
    qsci_cmd->add_option("--samples", qsci_samples,
                         "pre-sampled configuration file (bitstring count)");
    qsci_cmd->add_option("--filter-particle-number", qsci_filter,
                         "keep only configurations with this popcount");
    qsci_cmd->add_option("--max-k", qsci_max_k,
                         "keep at most this many configurations");

    // diag
    std::string diag_input;
    bool diag_dense = false, diag_iterative = false;
    auto* diag_cmd = app.add_subcommand("diag", "exact diagonalization");
    diag_cmd->add_option("input", diag_input)->required();
    diag_cmd->add_flag("--dense", diag_dense);
    diag_cmd->add_flag("--iterative", diag_iterative);

    // average
    std::vector<std::string> avg_inputs;
    std::string avg_out;
    auto* avg_cmd =
        app.add_subcommand("average", "mean coefficient per Pauli string");
    avg_cmd->add_option("inputs", avg_inputs)->required()->expected(-1);
    avg_cmd->add_option("-o,--out", avg_out)->required();

    // pipeline
    std::string pipe_config, pipe_csv, pipe_json;
    auto* pipe_cmd = app.add_subcommand("pipeline", "run a staged reduction");
    pipe_cmd->add_option("config", pipe_config)->required();
    pipe_cmd->add_option("--csv", pipe_csv, "write the batch CSV here");
    pipe_cmd->add_option("--json", pipe_json, "write the batch report here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*info) {
            HamiltonianFile f = load_input(info_input, global);
            json doc;
            doc["n_qubits"] = f.sum.n_qubits();
            doc["n_terms"] = f.sum.n_terms();
            doc["hermitian"] = f.sum.is_hermitian();
            doc["convention"] = f.metadata.convention;
            doc["provenance"] = f.metadata.provenance;
            if (f.metadata.reference_bitstring)
                doc["reference_bitstring"] = *f.metadata.reference_bitstring;
            if (!f.warnings.empty()) doc["warnings"] = f.warnings;
            emit(doc);
        } else if (*freeze_cmd) {
            HamiltonianFile f = load_input(freeze_input, global);
            std::vector<std::size_t> occupied = parse_index_list(freeze_occ);
            const std::vector<std::size_t> virtuals =
                parse_index_list(freeze_virt);
            if (freeze_has_threshold) {
                std::vector<double> energies;
                if (!freeze_energies.empty())
                    energies = load_orbital_energies(freeze_energies);
                else if (f.metadata.orbital_energies)
                    energies = *f.metadata.orbital_energies;
                else
                    throw std::runtime_error(
                        "--threshold needs --orbital-energies or metadata");
                for (std::size_t q :
                     core_indices_below(energies, freeze_threshold))
                    occupied.push_back(q);
            }
            PauliSum reduced = freeze_orbitals(f.sum, occupied, virtuals);
            HamiltonianMetadata md = f.metadata;
            md.provenance += " | freeze";
            md.reference_bitstring.reset();
            md.orbital_energies.reset();
            save_hamiltonian(freeze_out, reduced, md);
            json doc;
            doc["n_qubits"] = reduced.n_qubits();
            doc["n_terms"] = reduced.n_terms();
            doc["occupied"] = occupied;
            doc["virtual"] = virtuals;
            emit(doc);
        } else if (*taper_cmd) {
            HamiltonianFile f = load_input(taper_input, global);
            const SymmetryBasis basis = find_z2_symmetries(f.sum);
            json doc;
            json gens = json::array(), gens_sparse = json::array();
            for (const auto& g : basis.generators) {
                gens.push_back(render_pauli(g));
                gens_sparse.push_back(render_pauli_sparse(g));
            }
            doc["generators"] = gens;
            doc["generators_sparse"] = gens_sparse;
            doc["pivots"] = basis.pivot_qubits;
            if (basis.generators.empty()) {
                doc["note"] = "no Z2 symmetries found";
                emit(doc);
                return 0;
            }
            SymmetrySector sector;
            if (!taper_sector.empty()) {
                std::stringstream ss(taper_sector);
                std::string item;
                while (std::getline(ss, item, ','))
                    sector.assignments.push_back(std::stoi(item));
            } else if (taper_scan) {
                const auto scan = scan_sectors(f.sum, basis);
                sector = scan.front().sector;
                doc["scan_best_energy"] = scan.front().ground_energy;
            } else {
                std::optional<BitVec> ref;
                if (taper_reference == "auto") {
                    if (f.metadata.reference_bitstring)
                        ref = BitVec::from_string(
                            *f.metadata.reference_bitstring);
                } else {
                    ref = BitVec::from_string(taper_reference);
                }
                if (!ref)
                    throw std::runtime_error(
                        "no reference bitstring; use --reference, --sector or "
                        "--scan");
                sector = select_sector(basis, *ref);
            }
            const RotationSequence clifford = build_clifford(basis);
            PauliSum reduced = taper(f.sum, basis, sector);
            doc["sector"] = sector.assignments;
            json rotations = json::array();
            for (const auto& r : clifford.rotations)
                rotations.push_back(json{
                    {"generator", render_pauli(r.generator)},
                    {"angle", r.angle},
                    {"clifford", r.clifford}});
            doc["clifford_sequence"] = rotations;
            doc["n_qubits"] = reduced.n_qubits();
            doc["n_terms"] = reduced.n_terms();
            if (!taper_out.empty()) {
                HamiltonianMetadata md = f.metadata;
                md.provenance += " | taper";
                md.reference_bitstring.reset();
                md.orbital_energies.reset();
                save_hamiltonian(taper_out, reduced, md);
            }
            emit(doc);
        } else if (*ctx_cmd) {
            HamiltonianFile f = load_input(ctx_input, global);
            json doc = model_report(f.sum);
            auto [h_nc, residual] = partition_noncontextual(f.sum);
            const NoncontextualModel model = build_model(h_nc);
            const NoncontextualSolution solution = optimize(model);
            doc["noncontextual_terms"] = h_nc.n_terms();
            doc["residual_terms"] = residual.n_terms();
            json gens = json::array();
            for (const auto& g : model.symmetry_generators)
                gens.push_back(render_pauli(g));
            doc["generators"] = gens;
            json reps = json::array();
            for (const auto& c : model.clique_reps)
                reps.push_back(render_pauli(c));
            doc["clique_representatives"] = reps;
            doc["nu"] = solution.nu;
            doc["r"] = solution.r;
            doc["noncontextual_energy"] = solution.energy;
            doc["optimum_exact"] = solution.exact;

            if (!ctx_sweep_csv.empty()) {
                const SubsetMode mode = ctx_subset_mode == "brute"
                                            ? SubsetMode::brute_force
                                            : SubsetMode::greedy;
                const auto points = contextual_sweep(f.sum, mode);
                std::ofstream out(ctx_sweep_csv);
                if (!out)
                    throw std::runtime_error("cannot write " + ctx_sweep_csv);
                out << "n_qubits,energy,error_mha\n" << std::setprecision(15);
                for (const auto& p : points)
                    out << p.n_qubits << "," << p.energy << ","
                        << p.error * 1e3 << "\n";
                doc["sweep_csv"] = ctx_sweep_csv;
            }
            if (ctx_target >= 0) {
                const std::size_t target = static_cast<std::size_t>(ctx_target);
                if (target > f.sum.n_qubits())
                    throw std::runtime_error("target exceeds input width");
                const std::size_t need = f.sum.n_qubits() - target;
                if (need > model.n_generators())
                    throw std::runtime_error(
                        "not enough generators for that target");
                const auto ranking = rank_generators(model, solution);
                std::vector<std::size_t> chosen(ranking.begin(),
                                                ranking.begin() + need);
                PauliSum reduced =
                    contextual_project(f.sum, model, solution, chosen, target);
                doc["n_qubits"] = reduced.n_qubits();
                doc["n_terms"] = reduced.n_terms();
                if (!ctx_out.empty()) {
                    HamiltonianMetadata md = f.metadata;
                    md.provenance += " | contextual";
                    md.reference_bitstring.reset();
                    md.orbital_energies.reset();
                    save_hamiltonian(ctx_out, reduced, md);
                }
            }
            emit(doc);
        } else if (*qsci_cmd) {
            HamiltonianFile f = load_input(qsci_input, global);
            QsciOptions opts;
            opts.shots = qsci_shots;
            opts.noise_p = qsci_noise;
            opts.seed = global.seed;
            if (qsci_filter >= 0)
                opts.filter_particle_number =
                    static_cast<std::size_t>(qsci_filter);
            if (qsci_max_k > 0)
                opts.max_k = static_cast<std::size_t>(qsci_max_k);
            StateSource source = ExactGroundStateSource{};
            if (!qsci_samples.empty()) source = load_samples_file(qsci_samples);
            const QsciResult res = qsci_run(f.sum, source, opts);
            json doc;
            doc["energy"] = res.energy;
            doc["k_used"] = res.k_used;
            doc["shots"] = res.shots;
            doc["seed"] = res.seed;
            doc["degenerate"] = res.degenerate;
            emit(doc);
        } else if (*diag_cmd) {
            HamiltonianFile f = load_input(diag_input, global);
            json doc;
            if (diag_iterative ||
                (!diag_dense && f.sum.n_qubits() > dense_qubit_cap())) {
                const GroundStateResult g = ground_state(f.sum);
                doc["ground_energy"] = g.energy;
                doc["residual"] = g.residual;
                doc["converged"] = g.converged;
                doc["method"] = "iterative";
            } else {
                const SpectrumResult s = dense_spectrum(f.sum);
                doc["energies"] = s.eigenvalues;
                doc["ground_energy"] = s.eigenvalues.front();
                doc["method"] = "dense";
            }
            emit(doc);
        } else if (*avg_cmd) {
            std::vector<std::filesystem::path> paths(avg_inputs.begin(),
                                                     avg_inputs.end());
            PauliSum mean = average_hamiltonians(paths);
            HamiltonianMetadata md;
            md.provenance = "average of " + std::to_string(paths.size()) +
                            " Hamiltonian files";
            save_hamiltonian(avg_out, mean, md);
            json doc;
            doc["n_qubits"] = mean.n_qubits();
            doc["n_terms"] = mean.n_terms();
            doc["files"] = avg_inputs.size();
            emit(doc);
        } else if (*pipe_cmd) {
            PipelineConfig cfg = PipelineConfig::from_json_file(pipe_config);
            cfg.seed = global.seed != 1 ? global.seed : cfg.seed;
            if (!pipe_csv.empty()) cfg.output_csv = pipe_csv;
            if (!pipe_json.empty()) cfg.output_json = pipe_json;
            const auto reports = run_pipeline(cfg);
            json doc = json::array();
            for (const auto& r : reports) doc.push_back(r.to_json());
            emit(doc);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
