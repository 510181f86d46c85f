#include "qsw/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <iomanip>
#include <set>
#include <sstream>

#include "qsw/contextual.hpp"
#include "qsw/exact.hpp"
#include "qsw/projection.hpp"
#include "qsw/qsci.hpp"
#include "qsw/tapering.hpp"

namespace qsw {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownStages = {"freeze", "taper", "contextual",
                                            "solve"};

struct PipelineState {
    PauliSum sum;
    std::optional<BitVec> reference;  // invalidated by rotating stages
    HamiltonianMetadata metadata;

    PipelineState() : sum(0) {}
};

std::vector<std::size_t> indices_from(const json& j) {
    return j.get<std::vector<std::size_t>>();
}

double ground_energy_auto(const PauliSum& H, std::string* method_out = nullptr) {
    if (H.n_qubits() == 0) {
        if (method_out) *method_out = "scalar";
        return H.empty() ? 0.0 : H.terms().begin()->second.real();
    }
    if (H.n_qubits() <= 10) {
        if (method_out) *method_out = "dense";
        return dense_spectrum(H).eigenvalues.front();
    }
    if (method_out) *method_out = "iterative";
    return ground_state(H).energy;
}

json stage_freeze(PipelineState& state, const json& params) {
    std::vector<std::size_t> occupied, virtuals;
    if (params.contains("occupied")) occupied = indices_from(params["occupied"]);
    if (params.contains("virtual")) virtuals = indices_from(params["virtual"]);
    if (params.contains("threshold")) {
        const double delta = params["threshold"].get<double>();
        std::vector<double> energies;
        if (params.contains("orbital_energies_file")) {
            energies = load_orbital_energies(
                params["orbital_energies_file"].get<std::string>());
        } else if (state.metadata.orbital_energies) {
            energies = *state.metadata.orbital_energies;
        } else {
            throw std::runtime_error(
                "threshold freeze needs orbital energies (file or metadata)");
        }
        for (std::size_t q : core_indices_below(energies, delta))
            occupied.push_back(q);
    }
    state.sum = freeze_orbitals(state.sum, occupied, virtuals);
    if (state.reference) {
        std::vector<std::size_t> drop = occupied;
        drop.insert(drop.end(), virtuals.begin(), virtuals.end());
        std::sort(drop.begin(), drop.end());
        state.reference = state.reference->without_bits(drop);
    }
    json details;
    details["occupied"] = occupied;
    details["virtual"] = virtuals;
    return details;
}

json stage_taper(PipelineState& state, const json& params) {
    const SymmetryBasis basis = find_z2_symmetries(state.sum);
    json details;
    json gens = json::array();
    for (const auto& g : basis.generators) gens.push_back(render_pauli(g));
    details["generators"] = gens;
    details["pivots"] = basis.pivot_qubits;
    if (basis.generators.empty()) {
        details["note"] = "no Z2 symmetries found; Hamiltonian unchanged";
        return details;
    }

    SymmetrySector sector;
    if (params.contains("sector")) {
        sector.assignments = params["sector"].get<std::vector<int>>();
    } else if (params.value("scan", false)) {
        const auto scan = scan_sectors(state.sum, basis);
        sector = scan.front().sector;
        details["scanned_sectors"] = scan.size();
        details["scan_best_energy"] = scan.front().ground_energy;
    } else {
        std::optional<BitVec> ref = state.reference;
        if (params.contains("reference") &&
            params["reference"].get<std::string>() != "auto")
            ref = BitVec::from_string(params["reference"].get<std::string>());
        if (!ref)
            throw std::runtime_error(
                "taper needs a reference bitstring, an explicit sector, or "
                "scan=true");
        sector = select_sector(basis, *ref);
    }
    const RotationSequence clifford = build_clifford(basis);
    state.sum = taper(state.sum, basis, sector);
    state.reference.reset();  // basis rotated; bitstring no longer meaningful
    details["sector"] = sector.assignments;
    details["clifford_rotations"] = clifford.size();
    return details;
}

json stage_contextual(PipelineState& state, const json& params,
                      double threshold_mha) {
    json details;
    auto [h_nc, residual] = partition_noncontextual(state.sum);
    const NoncontextualModel model = build_model(h_nc);
    const NoncontextualSolution solution = optimize(model);
    details["noncontextual"] = residual.empty();
    details["noncontextual_terms"] = h_nc.n_terms();
    details["residual_terms"] = residual.n_terms();
    details["n_generators"] = model.n_generators();
    details["n_cliques"] = model.n_cliques();
    details["noncontextual_energy"] = solution.energy;
    details["nu"] = solution.nu;
    details["r"] = solution.r;
    details["optimum_exact"] = solution.exact;

    if (params.value("sweep", false)) {
        const SubsetMode mode =
            params.value("subset_mode", std::string("greedy")) == "brute"
                ? SubsetMode::brute_force
                : SubsetMode::greedy;
        const auto points = contextual_sweep(state.sum, mode);
        json sweep = json::array();
        std::optional<std::size_t> best_width;
        std::ostringstream csv;
        csv << "n_qubits,energy,error_mha\n";
        for (const auto& p : points) {
            const double err_mha = p.error * 1e3;
            sweep.push_back(json{{"n_qubits", p.n_qubits},
                                 {"energy", p.energy},
                                 {"error_mha", err_mha}});
            csv << p.n_qubits << "," << std::setprecision(15) << p.energy << ","
                << err_mha << "\n";
            if (err_mha <= threshold_mha &&
                (!best_width || p.n_qubits < *best_width))
                best_width = p.n_qubits;
        }
        details["sweep"] = sweep;
        if (best_width)
            details["smallest_width_within_threshold"] = *best_width;
        if (params.contains("sweep_csv")) {
            std::ofstream out(params["sweep_csv"].get<std::string>());
            if (!out) throw std::runtime_error("cannot write sweep csv");
            out << csv.str();
        }
        if (!params.contains("target_qubits")) return details;
    }

    const std::size_t target = params.at("target_qubits").get<std::size_t>();
    if (target > state.sum.n_qubits())
        throw std::runtime_error("target width exceeds current width");
    const std::size_t need = state.sum.n_qubits() - target;
    if (need > model.n_generators())
        throw std::runtime_error(
            "not enough noncontextual generators to reach the target width");
    const auto ranking = rank_generators(model, solution);
    std::vector<std::size_t> chosen(ranking.begin(), ranking.begin() + need);
    json chosen_json = json::array();
    for (std::size_t i : chosen)
        chosen_json.push_back(render_pauli(model.symmetry_generators[i]));
    details["projected_generators"] = chosen_json;
    state.sum = contextual_project(state.sum, model, solution, chosen, target);
    state.reference.reset();
    return details;
}

json stage_solve(PipelineState& state, const json& params, std::uint64_t seed,
                 PipelineReport& report) {
    const std::string method = params.value("method", std::string("dense"));
    json details;
    details["method"] = method;

    if (state.reference) {
        report.hf_energy = expectation_in_basis_state(state.sum, *state.reference);
        details["hf_energy"] = *report.hf_energy;
    }

    if (method == "dense") {
        const SpectrumResult s = dense_spectrum(state.sum);
        report.energy = s.eigenvalues.front();
        details["ground_energy"] = s.eigenvalues.front();
        details["gap"] = s.gap;
    } else if (method == "iterative") {
        const GroundStateResult g = ground_state(state.sum);
        report.energy = g.energy;
        details["ground_energy"] = g.energy;
        details["residual"] = g.residual;
        details["converged"] = g.converged;
    } else if (method == "qsci") {
        QsciOptions opts;
        opts.shots = params.value("shots", std::size_t{100000});
        opts.noise_p = params.value("noise", 0.0);
        opts.seed = seed;
        if (params.contains("filter_particle_number"))
            opts.filter_particle_number =
                params["filter_particle_number"].get<std::size_t>();
        if (params.contains("max_k"))
            opts.max_k = params["max_k"].get<std::size_t>();

        StateSource source = ExactGroundStateSource{};
        const QsciResult q = qsci_run(state.sum, source, opts);
        report.energy = q.energy;
        details["energy"] = q.energy;
        details["k_used"] = q.k_used;
        details["shots"] = q.shots;
        details["seed"] = q.seed;
        details["degenerate"] = q.degenerate;

        report.exact_energy = ground_energy_auto(state.sum);
        details["exact_energy"] = *report.exact_energy;
    } else {
        throw std::runtime_error("unknown solve method '" + method + "'");
    }
    if (!report.exact_energy && params.value("exact_reference", false))
        report.exact_energy = ground_energy_auto(state.sum);
    return details;
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& doc) {
    PipelineConfig cfg;
    if (doc.contains("input"))
        cfg.inputs.push_back(doc["input"].get<std::string>());
    if (doc.contains("inputs"))
        for (const auto& p : doc["inputs"])
            cfg.inputs.push_back(p.get<std::string>());
    cfg.seed = doc.value("seed", std::uint64_t{1});
    cfg.threshold_mha = doc.value("threshold_mha", kChemicalAccuracyMha);
    if (doc.contains("output_json"))
        cfg.output_json = doc["output_json"].get<std::string>();
    if (doc.contains("output_csv"))
        cfg.output_csv = doc["output_csv"].get<std::string>();
    for (const auto& s : doc.at("stages")) {
        StageConfig stage;
        stage.name = s.at("stage").get<std::string>();
        stage.params = s;
        cfg.stages.push_back(std::move(stage));
    }
    cfg.validate();
    return cfg;
}

PipelineConfig PipelineConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json doc;
    in >> doc;
    return from_json(doc);
}

void PipelineConfig::validate() const {
    if (inputs.empty())
        throw std::invalid_argument("pipeline config needs at least one input");
    if (stages.empty())
        throw std::invalid_argument("pipeline config needs at least one stage");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const std::string& name = stages[i].name;
        if (!kKnownStages.count(name))
            throw std::invalid_argument("unknown stage '" + name + "'");
        if (!seen.insert(name).second)
            throw std::invalid_argument("duplicate stage '" + name + "'");
        if (name == "solve" && i + 1 != stages.size())
            throw std::invalid_argument("solve stage must be last");
    }
}

json PipelineReport::to_json() const {
    json doc;
    doc["input"] = input.string();
    doc["seed"] = seed;
    doc["qubit_trail"] = qubit_trail;
    json stages_json = json::array();
    for (const auto& s : stages) {
        json e;
        e["stage"] = s.stage;
        e["qubits_after"] = s.qubits_after;
        e["elapsed_s"] = s.elapsed_s;
        e["details"] = s.details;
        stages_json.push_back(std::move(e));
    }
    doc["stages"] = stages_json;
    if (energy) doc["energy"] = *energy;
    if (exact_energy) {
        doc["exact_energy"] = *exact_energy;
        if (energy) doc["error_mha"] = (*energy - *exact_energy) * 1e3;
        if (hf_energy)
            doc["hf_error_mha"] = (*hf_energy - *exact_energy) * 1e3;
    }
    if (hf_energy) doc["hf_energy"] = *hf_energy;
    if (!warnings.empty()) doc["warnings"] = warnings;
    return doc;
}

PipelineReport run_pipeline_single(const PipelineConfig& config,
                                   const std::filesystem::path& input) {
    config.validate();
    PipelineReport report;
    report.input = input;
    report.seed = config.seed;

    PipelineState state;
    {
        HamiltonianFile file = load_hamiltonian(input);
        state.sum = std::move(file.sum);
        state.metadata = file.metadata;
        report.warnings = file.warnings;
        if (file.metadata.reference_bitstring)
            state.reference =
                BitVec::from_string(*file.metadata.reference_bitstring);
    }
    report.qubit_trail.push_back(state.sum.n_qubits());

    for (const auto& stage : config.stages) {
        const auto t0 = std::chrono::steady_clock::now();
        StageReport sr;
        sr.stage = stage.name;
        try {
            if (stage.name == "freeze") {
                sr.details = stage_freeze(state, stage.params);
            } else if (stage.name == "taper") {
                sr.details = stage_taper(state, stage.params);
            } else if (stage.name == "contextual") {
                sr.details =
                    stage_contextual(state, stage.params, config.threshold_mha);
            } else if (stage.name == "solve") {
                sr.details = stage_solve(state, stage.params, config.seed, report);
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("stage '" + stage.name +
                                     "' failed: " + e.what());
        }
        sr.qubits_after = state.sum.n_qubits();
        sr.elapsed_s = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
        report.qubit_trail.push_back(sr.qubits_after);
        report.stages.push_back(std::move(sr));
    }
    return report;
}

std::vector<PipelineReport> run_pipeline(const PipelineConfig& config) {
    config.validate();
    std::vector<std::future<PipelineReport>> futures;
    futures.reserve(config.inputs.size());
    for (const auto& input : config.inputs) {
        futures.push_back(std::async(std::launch::async, [&config, input] {
            return run_pipeline_single(config, input);
        }));
    }
    std::vector<PipelineReport> reports;
    reports.reserve(futures.size());
    for (auto& f : futures) reports.push_back(f.get());

    if (config.output_json) {
        json doc = json::array();
        for (const auto& r : reports) doc.push_back(r.to_json());
        std::ofstream out(*config.output_json);
        if (!out) throw std::runtime_error("cannot write report json");
        out << doc.dump(2) << "\n";
    }
    if (config.output_csv) {
        std::ofstream out(*config.output_csv);
        if (!out) throw std::runtime_error("cannot write report csv");
        out << batch_csv(reports, config.threshold_mha);
    }
    return reports;
}

std::string batch_csv(const std::vector<PipelineReport>& reports,
                      double threshold_mha) {
    std::ostringstream out;
    out << "input,n_qubits_final,exact_energy,hf_energy,solved_energy,"
           "hf_error_mha,error_mha,hf_within_threshold,within_threshold\n";
    out << std::setprecision(15);
    for (const auto& r : reports) {
        out << r.input.filename().string() << ","
            << (r.qubit_trail.empty() ? 0 : r.qubit_trail.back()) << ",";
        if (r.exact_energy) out << *r.exact_energy;
        out << ",";
        if (r.hf_energy) out << *r.hf_energy;
        out << ",";
        if (r.energy) out << *r.energy;
        out << ",";
        if (r.hf_energy && r.exact_energy)
            out << (*r.hf_energy - *r.exact_energy) * 1e3;
        out << ",";
        if (r.energy && r.exact_energy)
            out << (*r.energy - *r.exact_energy) * 1e3;
        out << ",";
        if (r.hf_energy && r.exact_energy)
            out << (std::abs(*r.hf_energy - *r.exact_energy) * 1e3 <=
                            threshold_mha
                        ? 1
                        : 0);
        out << ",";
        if (r.energy && r.exact_energy)
            out << (std::abs(*r.energy - *r.exact_energy) * 1e3 <= threshold_mha
                        ? 1
                        : 0);
        out << "\n";
    }
    return out.str();
}

}  // namespace qsw
