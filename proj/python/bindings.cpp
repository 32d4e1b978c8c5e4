#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qra/codec.hpp"
#include "qra/csv.hpp"
#include "qra/errors.hpp"
#include "qra/experiment.hpp"
#include "qra/protocols.hpp"
#include "qra/reservoir.hpp"
#include "qra/solvers.hpp"
#include "qra/stats.hpp"
#include "qra/validate.hpp"

namespace py = pybind11;
using namespace qra;

namespace {

Representation parse_mode(const std::string& mode) {
  if (mode == "pure") return Representation::pure;
  if (mode == "mixed") return Representation::mixed;
  throw ConfigError("mode must be 'pure' or 'mixed', got '" + mode + "'");
}

ReservoirConfig make_config(int nq, const std::string& mode, std::optional<int> shots, double scaling) {
  ReservoirConfig c = ReservoirConfig::make(nq, parse_mode(mode), shots);
  c.scaling = scaling;
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum reservoir autoencoder core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<IndexError>(m, "IndexError", PyExc_IndexError);
  py::register_exception<StateError>(m, "StateError", PyExc_RuntimeError);
  py::register_exception<ModeError>(m, "ModeError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<NoiseProfile>(m, "NoiseProfile")
      .def_static("zeros", &NoiseProfile::zeros, py::arg("num_qubits"))
      .def_static("constant", &NoiseProfile::constant, py::arg("num_qubits"), py::arg("p"))
      .def_static(
          "sample",
          [](int nq, std::uint64_t seed) {
            Rng rng(seed);
            return sample_noise_profile(nq, rng);
          },
          py::arg("num_qubits"), py::arg("seed"))
      .def_readwrite("p_enc", &NoiseProfile::p_enc)
      .def_readwrite("p_ent", &NoiseProfile::p_ent)
      .def_readwrite("p_rot", &NoiseProfile::p_rot)
      .def_readwrite("p_out", &NoiseProfile::p_out)
      .def("flatten", &NoiseProfile::flatten)
      .def("__len__", &NoiseProfile::size);

  m.def("feature_dimension", &feature_dimension, py::arg("num_qubits"));
  m.def("noise_parameter_count", &noise_parameter_count, py::arg("num_qubits"));
  m.def("compute_d_aug", &compute_d_aug, py::arg("num_qubits"), py::arg("poly_degree") = kDefaultPolyDegree);

  m.def(
      "run_sequence",
      [](const Vector& input, const NoiseProfile& profile, const std::string& mode, double scaling) {
        return run_sequence(input, profile, make_config(static_cast<int>(profile.p_enc.size()), mode, std::nullopt, scaling));
      },
      py::arg("input"), py::arg("profile"), py::arg("mode") = "pure", py::arg("scaling") = 1.0,
      "Exact Nc x D feature matrix for one input sequence.");
  m.def(
      "apply_shot_noise",
      [](const FeatureMatrix& v, int shots, std::uint64_t seed) {
        Rng rng(seed);
        return apply_shot_noise(v, shots, rng);
      },
      py::arg("features"), py::arg("n_shots"), py::arg("seed"));

  m.def(
      "generate_key",
      [](int nc, int nq, std::uint64_t seed) {
        Rng rng(seed);
        return generate_key(nc, nq, rng).values;
      },
      py::arg("nc"), py::arg("num_qubits"), py::arg("seed"));
  m.def(
      "encode",
      [](const Vector& key, int nc, int nq, const Vector& c) { return encode_f(make_key(key, nc, nq), c); },
      py::arg("key"), py::arg("nc"), py::arg("num_qubits"), py::arg("values"));

  m.def(
      "ridge_solve", [](const Matrix& v, const Matrix& y, double lambda) { return ridge_solve(v, y, lambda).w; },
      py::arg("features"), py::arg("targets"), py::arg("lam"));

  m.def(
      "als_single_c",
      [](int nc, int nq, const std::string& mode, std::optional<int> shots, std::uint64_t seed, int n_iter,
         double lambda) {
        Rng rng(seed);
        const KeySet keys = KeySet::generate(nc, nq, rng);
        const Vector c = generate_plaintext(nc, rng);
        const NoiseProfile pa = sample_noise_profile(nq, rng);
        const NoiseProfile pb = sample_noise_profile(nq, rng);
        AlsOptions opts;
        opts.n_iter = n_iter;
        opts.lambda = lambda;
        const AlsTrace t = als_single_c(c, keys, pa, pb, make_config(nq, mode, shots, 1.0), opts, rng);
        return py::dict(py::arg("loss") = t.loss, py::arg("mse_path1") = t.mse_path1,
                        py::arg("mse_path2") = t.mse_path2);
      },
      py::arg("nc"), py::arg("num_qubits"), py::arg("mode") = "pure", py::arg("n_shots") = py::none(),
      py::arg("seed") = 0, py::arg("n_iter") = 40, py::arg("lam") = 1e-10,
      "Single-C ALS on a random plaintext, keys and reservoir pair drawn from `seed`.");

  m.def(
      "two_phase",
      [](int nc, int nq, int m_train, int n_test, std::uint64_t seed, int poly_degree) {
        Rng rng(seed);
        const KeySet keys = KeySet::generate(nc, nq, rng);
        const ReservoirConfig cfg = make_config(nq, "pure", std::nullopt, 1.0);
        Reservoir ra(sample_noise_profile(nq, rng), cfg);
        Reservoir rb(sample_noise_profile(nq, rng), cfg);
        std::vector<Vector> train, test;
        for (int j = 0; j < m_train; ++j) train.push_back(generate_plaintext(nc, rng));
        for (int j = 0; j < n_test; ++j) test.push_back(generate_plaintext(nc, rng));
        TwoPhaseOptions opts;
        opts.poly_degree = poly_degree;
        const ProtocolPath path{&keys.a, &ra, &keys.beta, &rb};
        const PerPositionDecoder dec = two_phase_train(train, path, opts, rng);
        return two_phase_evaluate(test, dec, path, opts, rng);
      },
      py::arg("nc"), py::arg("num_qubits"), py::arg("m"), py::arg("n_test") = 20, py::arg("seed") = 0,
      py::arg("poly_degree") = kDefaultPolyDegree, "Held-out Path-1 MSE of the two-phase protocol (ideal).");

  m.def(
      "paired_t_test",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const TTestResult r = paired_t_test(a, b);
        return py::dict(py::arg("t") = r.t, py::arg("p") = r.p, py::arg("df") = r.df,
                        py::arg("degenerate") = r.degenerate);
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "wilcoxon_signed_rank",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const WilcoxonResult r = wilcoxon_signed_rank(a, b);
        return py::dict(py::arg("statistic") = r.statistic, py::arg("p") = r.p, py::arg("n") = r.n,
                        py::arg("exact") = r.exact);
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "run_spec",
      [](const std::string& spec_text, std::uint64_t master_seed, unsigned threads) {
        const ExperimentSpec spec = parse_spec_text(spec_text);
        std::vector<ResultRecord> recs;
        {
          py::gil_scoped_release release;
          recs = run_experiment(spec, RunOptions{master_seed, threads, false});
        }
        return records_to_csv(recs);
      },
      py::arg("spec"), py::arg("master_seed") = 0, py::arg("threads") = 1,
      "Runs a `key = value` experiment spec and returns the result CSV text.");

  m.def("validate", [] {
    py::list out;
    for (const auto& r : run_invariant_suites()) out.append(py::make_tuple(r.name, r.passed, r.detail));
    return out;
  });
}
