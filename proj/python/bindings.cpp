#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "specker/boundcheck.hpp"
#include "specker/construction.hpp"
#include "specker/funalg.hpp"
#include "specker/intlat.hpp"
#include "specker/scales.hpp"
#include "specker/serialize.hpp"

namespace py = pybind11;
using namespace specker;

// Python int <-> BigInt through decimal strings.
namespace pybind11::detail {
template <>
struct type_caster<BigInt> {
    PYBIND11_TYPE_CASTER(BigInt, const_name("int"));

    bool load(handle src, bool) {
        if (!PyLong_Check(src.ptr()) || PyBool_Check(src.ptr())) return false;
        value = from_dec(std::string(py::str(src)));
        return true;
    }

    static handle cast(const BigInt& v, return_value_policy, handle) {
        return PyLong_FromString(v.get_str(10).c_str(), nullptr, 10);
    }
};
}  // namespace pybind11::detail

namespace {

IntMatrix to_matrix(const std::vector<std::vector<BigInt>>& rows) {
    if (rows.empty() || rows[0].empty()) throw std::invalid_argument("matrix must be nonempty");
    std::vector<BigInt> flat;
    for (const auto& r : rows) {
        if (r.size() != rows[0].size()) throw std::invalid_argument("ragged matrix");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return IntMatrix(rows.size(), rows[0].size(), std::move(flat));
}

std::vector<std::vector<BigInt>> from_matrix(const IntMatrix& a) {
    std::vector<std::vector<BigInt>> out(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out[r].push_back(a(r, c));
    return out;
}

py::object parse(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

GeneratorFamily load(const std::string& text) { return family_from_json(json::parse(text)); }

// None from Python means "not evaluable here".
SeedFn seed_from(py::function f) {
    return [f](const BigInt& x) -> EvalResult {
        py::gil_scoped_acquire gil;
        py::object r = f(x);
        if (r.is_none()) return EvalResult::unknown(UnknownReason::NoWitness);
        return EvalResult::of(r.cast<BigInt>());
    };
}

}  // namespace

PYBIND11_MODULE(_specker, m) {
    m.doc() = "Exact kernels of the Specker-group generator construction";

    py::register_exception<NoNonzeroKernel>(m, "NoNonzeroKernel", PyExc_ValueError);
    py::register_exception<HorizonExceeded>(m, "HorizonExceeded", PyExc_RuntimeError);
    py::register_exception<AuditFailure>(m, "AuditFailure", PyExc_RuntimeError);
    py::register_exception<DominationFails>(m, "DominationFails", PyExc_ValueError);

    m.def("kernel_basis", [](const std::vector<std::vector<BigInt>>& a) {
        std::vector<std::vector<BigInt>> out;
        for (const auto& v : kernel_basis(to_matrix(a)).basis) out.push_back(v.entries());
        return out;
    }, py::arg("matrix"));
    m.def("min_solution", [](const std::vector<std::vector<BigInt>>& a, const BigInt& n) {
        return min_solution(to_matrix(a), n).entries();
    }, py::arg("matrix"), py::arg("threshold"));
    m.def("brute_min_solution",
          [](const std::vector<std::vector<BigInt>>& a, const BigInt& n, const BigInt& box)
              -> std::optional<std::vector<BigInt>> {
              auto v = brute_min_solution(to_matrix(a), n, box);
              if (!v) return std::nullopt;
              return v->entries();
          },
          py::arg("matrix"), py::arg("threshold"), py::arg("box"));

    m.def("partition_block", [](const BigInt& n) { return partition_block(n); }, py::arg("n"));
    m.def("matrix_for_index", [](const BigInt& n, std::size_t k) { return from_matrix(matrix_for_index(n, k)); },
          py::arg("n"), py::arg("k"));
    m.def("block_of_matrix", [](const std::vector<std::vector<BigInt>>& b) { return block_of_matrix(to_matrix(b)); },
          py::arg("matrix"));

    m.def("diag_scale", [](std::vector<py::function> fs, std::size_t steps) {
        std::vector<SeedFn> seeds;
        for (auto& f : fs) seeds.push_back(seed_from(f));
        return diag_scale(seeds, steps).values();
    }, py::arg("seeds"), py::arg("steps"));
    m.def("nwd_extend", [](const std::vector<BigInt>& s, py::function f, std::uint64_t l, std::uint64_t mm) {
        NatFn g = [f](const BigInt& x) { return f(x).cast<BigInt>(); };
        return nwd_extend(s, g, l, mm);
    }, py::arg("s"), py::arg("f"), py::arg("l"), py::arg("m"));

    m.def("evaluate_points", [](const std::vector<long>& values, const std::string& expr, const BigInt& n) {
        // expr: a composition like "hat", "neg", "tmin2", read outermost first.
        FuncExpr e = FuncExpr::points("x", values);
        std::vector<std::string> ops;
        std::string cur;
        for (char c : expr + ",") {
            if (c == ',') {
                if (!cur.empty()) ops.push_back(cur);
                cur.clear();
            } else if (c != ' ') {
                cur += c;
            }
        }
        for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
            if (*it == "hat") e = hat(e);
            else if (*it == "neg") e = neg(e);
            else if (it->rfind("tmin", 0) == 0) e = threshold_min(e, from_dec(it->substr(4)));
            else throw std::invalid_argument("unknown operation '" + *it + "'");
        }
        EvalResult r = evaluate(e, n);
        return r.known() ? std::optional<BigInt>(*r) : std::nullopt;
    }, py::arg("values"), py::arg("ops"), py::arg("n"));

    m.def("build_family",
          [](std::size_t k, std::size_t stages, std::size_t breakpoints, std::size_t depth, std::size_t count,
             std::size_t min_hits, std::uint64_t seed, std::size_t samples) {
              BuildConfig c;
              c.k = k;
              c.stages = stages;
              c.breakpoints = breakpoints;
              c.depth = depth;
              c.count = count;
              c.min_hits = min_hits;
              c.seed = seed;
              c.samples = samples;
              std::string out;
              {
                  py::gil_scoped_release nogil;
                  out = to_json(build_family(c)).dump(2);
              }
              return out;
          },
          py::arg("k") = 1, py::arg("stages") = 3, py::arg("breakpoints") = 12, py::arg("depth") = 3,
          py::arg("count") = 64, py::arg("min_hits") = 3, py::arg("seed") = 1, py::arg("samples") = 20,
          "Builds a generator family and returns its JSON text.");
    m.def("verify_family", [](const std::string& text) {
        GeneratorFamily fam = load(text);
        py::gil_scoped_release nogil;
        verify_family(fam);
    }, py::arg("family_json"));
    m.def("certify_unbounded", [](const std::string& text, std::size_t alpha, const std::vector<BigInt>& coeffs) {
        GeneratorFamily fam = load(text);
        json j;
        {
            py::gil_scoped_release nogil;
            j = to_json(certify_unbounded(fam, alpha, Poly(coeffs), 2, fam.horizon + 1));
        }
        return parse(j);
    }, py::arg("family_json"), py::arg("stage"), py::arg("coeffs"));
    m.def("preservation_traces", [](const std::string& text, std::size_t count, std::uint64_t seed) {
        GeneratorFamily fam = load(text);
        json out = json::array();
        {
            py::gil_scoped_release nogil;
            for (const auto& terms : sample_combinations(fam, count, 3, seed))
                out.push_back({{"terms", to_json(terms)}, {"trace", to_json(verify_preservation(fam, terms, fam.config.min_hits))}});
        }
        return parse(out);
    }, py::arg("family_json"), py::arg("count") = 20, py::arg("seed") = 1);
}
