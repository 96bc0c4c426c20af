#include "report_json.hpp"

#include <stdexcept>

namespace lorentz::cli {

using nlohmann::json;

json to_json(const verify::Report& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"id", c.id},
                          {"name", c.name},
                          {"anchor", c.anchor},
                          {"kind", c.trend ? "trend" : "exact"},
                          {"status", c.passed ? "pass" : "fail"},
                          {"measured", c.measured},
                          {"tolerance", c.tolerance},
                          {"detail", c.detail},
                          {"seconds", c.seconds}});
    return {{"schema", "lorentz-bg/verify-report/1"},
            {"level", verify::to_string(r.level)},
            {"seed", r.seed},
            {"all_passed", r.all_passed()},
            {"seconds", r.seconds},
            {"checks", checks}};
}

namespace {
template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("verify report: missing key '") + key + "'");
    return j.at(key).get<T>();
}
}  // namespace

verify::Report report_from_json(const json& j) {
    if (!j.is_object() || field<std::string>(j, "schema") != "lorentz-bg/verify-report/1")
        throw std::invalid_argument("verify report: unknown schema");
    verify::Report r;
    r.level = verify::parse_level(field<std::string>(j, "level"));
    r.seed = field<std::uint64_t>(j, "seed");
    r.seconds = field<double>(j, "seconds");
    for (const auto& c : field<json>(j, "checks")) {
        verify::Check k;
        k.id = field<int>(c, "id");
        k.name = field<std::string>(c, "name");
        k.anchor = field<std::string>(c, "anchor");
        const auto kind = field<std::string>(c, "kind");
        const auto status = field<std::string>(c, "status");
        if ((kind != "trend" && kind != "exact") || (status != "pass" && status != "fail"))
            throw std::invalid_argument("verify report: bad kind or status");
        k.trend = kind == "trend";
        k.passed = status == "pass";
        k.measured = field<double>(c, "measured");
        k.tolerance = field<double>(c, "tolerance");
        k.detail = field<std::string>(c, "detail");
        k.seconds = field<double>(c, "seconds");
        r.checks.push_back(k);
    }
    if (field<bool>(j, "all_passed") != r.all_passed())
        throw std::invalid_argument("verify report: all_passed disagrees with the checks");
    return r;
}

}  // namespace lorentz::cli
