#include "selfaffine/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "selfaffine/errors.hpp"

namespace selfaffine::serialize {

namespace {

[[noreturn]] void parse_fail(const std::string& context) {
    throw Error(ErrorCode::ParseError, context);
}

MatZ matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) parse_fail("\"matrix\" must be a nonempty array of rows");
    const int rows = static_cast<int>(j.size());
    if (!j[0].is_array()) parse_fail("\"matrix\" rows must be arrays");
    const int cols = static_cast<int>(j[0].size());
    if (rows != cols) parse_fail("\"matrix\" must be square");
    MatZ m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
            parse_fail("\"matrix\" rows must all have the same length");
        for (int k = 0; k < cols; ++k) m(i, k) = int_from_json(j[i][k]);
    }
    return m;
}

VecZ veci_from_json(const json& j, const char* field) {
    if (!j.is_array()) parse_fail(std::string(field) + " must be an array of integers");
    VecZ v;
    for (const auto& x : j) v.push_back(int_from_json(x));
    return v;
}

json veci_to_json(const VecZ& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(int_to_json(x));
    return a;
}

json word_to_json(const system::Word& w) {
    json a = json::array();
    for (int l : w.letters) a.push_back(l);
    return a;
}

json map_to_json(const system::AffineMap& m) {
    json lin = json::array();
    for (int i = 0; i < m.linear.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.linear.cols(); ++k) row.push_back(rat_str(m.linear(i, k)));
        lin.push_back(row);
    }
    json tr = json::array();
    for (const auto& x : m.translation) tr.push_back(rat_str(x));
    return json{{"linear", lin}, {"translation", tr}};
}

}  // namespace

json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return json(static_cast<int64_t>(v.get_si()));
    return json(v.get_str());
}

Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<int64_t>()));
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            parse_fail("malformed integer string \"" + j.get<std::string>() + "\"");
        }
    }
    parse_fail("expected an integer (number or decimal string)");
}

std::string rat_str(const Rat& v) {
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

json complex_to_json(std::complex<double> z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", z.real());
    std::string re = buf;
    std::snprintf(buf, sizeof buf, "%.17g", z.imag());
    return json{{"re", re}, {"im", std::string(buf)}};
}

json system_to_json(const system::AffineSystem& sys) {
    const MatZ& m = sys.matrix().entries();
    json mat = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(int_to_json(m(i, k)));
        mat.push_back(row);
    }
    json digits = json::array();
    for (const auto& d : sys.digits())
        digits.push_back(json{{"scale", d.scale}, {"vec", veci_to_json(d.vec)}});
    return json{{"matrix", mat}, {"digits", digits}};
}

system::AffineSystem system_from_json(const json& j) {
    if (!j.is_object()) parse_fail("system file must be a JSON object");
    if (!j.contains("matrix")) parse_fail("system file is missing \"matrix\"");
    if (!j.contains("digits")) parse_fail("system file is missing \"digits\"");

    auto matrix = intlinalg::certify_expanding(matrix_from_json(j["matrix"]));
    if (!j["digits"].is_array()) parse_fail("\"digits\" must be an array");
    std::vector<system::ScaledVector> digits;
    for (const auto& dj : j["digits"]) {
        if (!dj.is_object() || !dj.contains("scale") || !dj.contains("vec"))
            parse_fail("each digit must be an object with \"scale\" and \"vec\"");
        if (!dj["scale"].is_number_integer()) parse_fail("digit \"scale\" must be an integer");
        int scale = dj["scale"].get<int>();
        if (scale < 0) parse_fail("digit \"scale\" must be >= 0");
        digits.push_back(system::ScaledVector{scale, veci_from_json(dj["vec"], "digit \"vec\"")});
    }
    return system::build_system(std::move(matrix), std::move(digits));
}

std::pair<intlinalg::ExpandingMatrix, density::TargetTuple> target_from_json(
    const json& j, std::optional<double> epsilon_override) {
    if (!j.is_object()) parse_fail("target file must be a JSON object");
    if (!j.contains("matrix")) parse_fail("target file is missing \"matrix\"");
    if (!j.contains("targets")) parse_fail("target file is missing \"targets\"");

    auto matrix = intlinalg::certify_expanding(matrix_from_json(j["matrix"]));
    density::TargetTuple t;
    t.dim = matrix.dim();
    if (!j["targets"].is_array()) parse_fail("\"targets\" must be an array of vectors");
    for (const auto& vj : j["targets"]) {
        if (!vj.is_array()) parse_fail("each target must be an array of numbers");
        VecQ v;
        for (const auto& x : vj) {
            if (x.is_number()) {
                v.emplace_back(x.get<double>());
            } else if (x.is_string()) {
                // Exact rational "p/q" accepted alongside plain numbers.
                try {
                    Rat r(x.get<std::string>());
                    r.canonicalize();
                    v.push_back(std::move(r));
                } catch (const std::invalid_argument&) {
                    parse_fail("malformed rational \"" + x.get<std::string>() + "\"");
                }
            } else {
                parse_fail("target entries must be numbers or rational strings");
            }
        }
        t.vectors.push_back(std::move(v));
    }
    if (epsilon_override) {
        t.tolerance = Rat(*epsilon_override);
    } else if (j.contains("epsilon") && j["epsilon"].is_number()) {
        t.tolerance = Rat(j["epsilon"].get<double>());
    } else {
        parse_fail("no tolerance: pass --epsilon or add \"epsilon\" to the target file");
    }
    return {std::move(matrix), std::move(t)};
}

json certificate_to_json(const overlap::OSCCertificate& cert) {
    json labels = json::array();
    for (const auto& l : cert.labels) labels.push_back(veci_to_json(l.residues));
    return json{{"kind", "osc"}, {"m0", cert.m0}, {"labels", labels}};
}

json certificate_to_json(const overlap::OverlapCertificate& cert) {
    return json{{"kind", "overlap"},
                {"depth", cert.depth},
                {"word_a", word_to_json(cert.word_a)},
                {"word_b", word_to_json(cert.word_b)},
                {"composed_map", map_to_json(cert.composed)}};
}

json certificate_to_json(const overlap::NoOverlapProof& proof) {
    return json{{"kind", "no_overlap"},
                {"state_bound", rat_str(proof.state_bound)},
                {"explored_states", proof.explored_states},
                {"reached_zero", proof.reached_zero}};
}

json certificate_to_json(const fourier::SingularityCertificate& cert) {
    return json{{"kind", "singularity"},
                {"w", veci_to_json(cert.w)},
                {"window", json::array({cert.n_minus, cert.n_plus})},
                {"outside_window_reason", cert.outside_window_reason},
                {"product_log_bound", rat_str(cert.product_log_bound)},
                {"truncation_error", rat_str(cert.truncation_error)}};
}

json report_to_json(const overlap::ClassificationReport& report) {
    json certs = json::array();
    if (report.osc_certificate) certs.push_back(certificate_to_json(*report.osc_certificate));
    if (report.overlap_certificate)
        certs.push_back(certificate_to_json(*report.overlap_certificate));
    if (report.no_overlap_proof) certs.push_back(certificate_to_json(*report.no_overlap_proof));

    json r{{"branch", overlap::branch_name(report.branch)},
           {"certificates", certs},
           {"estimates", json::object()},
           {"status", report.status},
           {"manifest", json::object()}};
    if (!report.detail.empty()) r["detail"] = report.detail;
    if (report.normalized_system) {
        r["normalized_system"] = system_to_json(*report.normalized_system);
        json shift = json::array();
        for (const auto& x : report.conjugacy.shift) shift.push_back(rat_str(x));
        r["conjugacy"] = json{{"power", report.conjugacy.power}, {"shift", shift}};
    }
    return r;
}

json viewport_to_json(const geometry::Viewport& vp) {
    json lo = json::array();
    for (const auto& x : vp.lo) lo.push_back(rat_str(x));
    return json{{"lo", lo}, {"cell", rat_str(vp.cell)}, {"resolution", vp.resolution}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) parse_fail("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        parse_fail(path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace selfaffine::serialize
