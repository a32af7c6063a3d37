#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <variant>

#include "amqlab/cli.hpp"
#include "amqlab/harness.hpp"
#include "amqlab/report.hpp"

namespace py = pybind11;
using namespace amqlab;

namespace {

py::object to_int(const BigNat& n) { return py::module_::import("builtins").attr("int")(n.to_string()); }

py::object to_fraction(const ExactRational& x) {
  const auto int_ = py::module_::import("builtins").attr("int");
  return py::module_::import("fractions")
      .attr("Fraction")(int_(x.numerator().get_str()), int_(x.denominator().get_str()));
}

py::object json_value(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

cli::CliConfig config_from(const std::string& structure, const py::kwargs& params) {
  cli::CliConfig c;
  c.structure = structure;
  for (const auto& [key, value] : params) {
    const auto name = py::cast<std::string>(key);
    if (name == "m") {
      c.m = py::cast<std::uint64_t>(value);
    } else if (name == "k") {
      c.k = py::cast<std::uint64_t>(value);
    } else if (name == "p") {
      c.p = py::cast<unsigned>(value);
    } else if (name == "q") {
      c.q = py::cast<unsigned>(value);
    } else if (name == "r") {
      c.r = py::cast<unsigned>(value);
    } else if (name == "blocks") {
      c.blocks = py::cast<std::uint64_t>(value);
    } else if (name == "bound") {
      c.bound = py::cast<std::uint32_t>(value);
    } else {
      throw py::type_error("unknown structure parameter: " + name);
    }
  }
  return c;
}

template <AmqPolicy A>
struct Live {
  A amq;
  AmqPair<A> filter;
};

template <class... A>
std::variant<Live<A>...> make_live(const std::variant<A...>& any) {
  return std::visit([](const auto& a) -> std::variant<Live<A>...> { return Live<std::decay_t<decltype(a)>>{a, amq_new(a)}; },
                    any);
}

using AnyLive = decltype(make_live(std::declval<cli::AnyAmq>()));

/// A filter plus its hash layer and a seeded generator, driven from Python.
class PyFilter {
 public:
  PyFilter(const std::string& structure, std::uint64_t seed, const py::kwargs& params)
      : live_(make_live(cli::make_structure(config_from(structure, params)))), rng_(seed) {}

  void add(Key key) {
    std::visit([&](auto& l) { l.filter = amq_add(l.amq, key, std::move(l.filter), rng_); }, live_);
  }

  void add_many(const std::vector<Key>& keys) {
    std::visit([&](auto& l) { l.filter = amq_addm(l.amq, keys, std::move(l.filter), rng_); }, live_);
  }

  bool query(Key key) {
    return std::visit(
        [&](auto& l) {
          auto [hash, answer] = amq_query(l.amq, key, std::move(l.filter.hash), l.filter.state, rng_);
          l.filter.hash = std::move(hash);
          return answer;
        },
        live_);
  }

  void remove(Key key) {
    auto* counting = std::get_if<Live<CountingBloomFilter>>(&live_);
    if (!counting) throw py::type_error("remove is only defined for counting filters");
    counting->filter = cf_remove(counting->amq, key, std::move(counting->filter), rng_);
  }

  py::bytes state_bytes() const {
    const auto bytes = std::visit([](const auto& l) { return serialize(l.filter.state); }, live_);
    return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
  }

  std::string structure() const {
    return std::visit([](const auto& l) { return structure_name(l.amq); }, live_);
  }

  py::dict params() const {
    py::dict out;
    std::visit(
        [&](const auto& l) {
          for (const auto& [name, value] : structure_params(l.amq)) out[py::str(name)] = value;
        },
        live_);
    return out;
  }

 private:
  AnyLive live_;
  Rng rng_;
};

template <class F>
auto with_structure(const std::string& structure, const py::kwargs& params, F&& f) {
  return std::visit(std::forward<F>(f), cli::make_structure(config_from(structure, params)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact and simulated false-positive analysis of approximate membership query structures";

  py::register_exception<CapacityExceeded>(m, "CapacityExceeded", PyExc_RuntimeError);
  py::register_exception<CounterSaturation>(m, "CounterSaturation", PyExc_RuntimeError);
  py::register_exception<UnderflowRemoval>(m, "UnderflowRemoval", PyExc_RuntimeError);
  py::register_exception<EnumerationTooLarge>(m, "EnumerationTooLarge", PyExc_RuntimeError);
  py::register_exception<InfeasibleExact>(m, "InfeasibleExact", PyExc_RuntimeError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  m.def("stirling2", [](std::uint64_t n, std::uint64_t t) { return to_int(stirling2(n, t)); }, py::arg("n"),
        py::arg("t"));
  m.def("stirling2_recurrence", [](std::uint64_t n, std::uint64_t t) { return to_int(stirling2_recurrence(n, t)); },
        py::arg("n"), py::arg("t"));

  m.def("bloom_false_positive", [](std::uint64_t mb, std::uint64_t k, std::uint64_t l) {
        return to_fraction(bloom_false_positive({mb, k}, l));
      }, py::arg("m"), py::arg("k"), py::arg("l"));
  m.def("bloom_false_positive_float", [](std::uint64_t mb, std::uint64_t k, std::uint64_t l) {
        return bloom_false_positive_float({mb, k}, l);
      }, py::arg("m"), py::arg("k"), py::arg("l"));
  m.def("bloom_classic_bound", [](std::uint64_t mb, std::uint64_t k, std::uint64_t l) {
        return to_fraction(bloom_classic_bound({mb, k}, l));
      }, py::arg("m"), py::arg("k"), py::arg("l"));
  m.def("bloom_bit_set_prob", [](std::uint64_t mb, std::uint64_t k, std::uint64_t l) {
        return to_fraction(bloom_bit_set_prob({mb, k}, l));
      }, py::arg("m"), py::arg("k"), py::arg("l"));
  m.def("quotient_false_positive", [](unsigned q, unsigned r, std::uint64_t l) {
        return to_fraction(quotient_false_positive({q, r}, l));
      }, py::arg("q"), py::arg("r"), py::arg("l"));

  m.def("analytic_false_positive", [](const std::string& structure, std::uint64_t l, const py::kwargs& params) {
        const auto v = with_structure(structure, params, [&](const auto& a) { return analytic_false_positive(a, l); });
        return py::make_tuple(v.exact ? to_fraction(*v.exact) : py::none(), v.value);
      }, py::arg("structure"), py::arg("l"),
      "(exact Fraction or None, float) for the given structure after l inserts");
  m.def("oracle_false_positive", [](const std::string& structure, std::uint64_t l, const py::kwargs& params) {
        return to_fraction(with_structure(structure, params, [&](const auto& a) { return oracle_false_positive(a, l); }));
      }, py::arg("structure"), py::arg("l"), "exact probability by enumerating every hash outcome");
  m.def("estimate_fp", [](const std::string& structure, std::uint64_t l, std::uint64_t trials, std::uint64_t seed,
                          double z, const py::kwargs& params) {
        const auto report = with_structure(structure, params, [&](const auto& a) {
          py::gil_scoped_release release;
          return estimate_fp(a, l, trials, seed, z);
        });
        return json_value(to_json(report));
      }, py::arg("structure"), py::arg("l"), py::arg("trials") = 10000, py::arg("seed") = 42, py::arg("z") = 4.0,
      "seeded Monte-Carlo estimate as a report dict");
  m.def("check_no_false_negatives", [](const std::string& structure, std::uint64_t l, std::uint64_t trials,
                                       std::uint64_t seed, const py::kwargs& params) {
        const auto r = with_structure(structure, params, [&](const auto& a) {
          return check_no_false_negatives(a, l, trials, seed);
        });
        py::dict out;
        out["status"] = to_string(r.status);
        out["trials"] = r.trials;
        out["failures"] = r.failures;
        out["rejected"] = r.rejected;
        out["counterexample"] = r.counterexample;
        return out;
      }, py::arg("structure"), py::arg("l"), py::arg("trials") = 10000, py::arg("seed") = 42);

  m.def("wilson_interval", [](std::uint64_t successes, std::uint64_t trials, double z) {
        const auto ci = wilson_interval(successes, trials, z);
        return py::make_tuple(ci.low, ci.high);
      }, py::arg("successes"), py::arg("trials"), py::arg("z"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"amqlab"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      }, py::arg("args"), "runs the command-line front end in-process; returns (exit code, stdout, stderr)");

  py::class_<PyFilter>(m, "Filter")
      .def(py::init<const std::string&, std::uint64_t, const py::kwargs&>(), py::arg("structure"),
           py::arg("seed") = 42)
      .def("add", &PyFilter::add, py::arg("key"))
      .def("add_many", &PyFilter::add_many, py::arg("keys"))
      .def("query", &PyFilter::query, py::arg("key"))
      .def("remove", &PyFilter::remove, py::arg("key"))
      .def("state_bytes", &PyFilter::state_bytes)
      .def_property_readonly("structure", &PyFilter::structure)
      .def_property_readonly("params", &PyFilter::params)
      .def("__repr__", [](const PyFilter& f) { return "<amqlab.Filter " + f.structure() + ">"; });
}
