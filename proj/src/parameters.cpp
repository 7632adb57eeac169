#include "scp/parameters.hpp"

#include "scp/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace scp
{

namespace
{

struct NumericField
{
    std::string_view name;
    double ModelParameters::*member;
};

constexpr NumericField kNumericFields[] = {
    {"mu_max", &ModelParameters::mu_max},
    {"m", &ModelParameters::m},
    {"alpha", &ModelParameters::alpha},
    {"delta", &ModelParameters::delta},
    {"K_S", &ModelParameters::K_S},
    {"K_Nox", &ModelParameters::K_Nox},
    {"K_O", &ModelParameters::K_O},
    {"K_N", &ModelParameters::K_N},
    {"K_eW", &ModelParameters::K_eW},
    {"K_eN", &ModelParameters::K_eN},
    {"K_eC1", &ModelParameters::K_eC1},
    {"K_eC2", &ModelParameters::K_eC2},
    {"K_eC3", &ModelParameters::K_eC3},
    {"c_In_N", &ModelParameters::c_In_N},
    {"c_In_Na", &ModelParameters::c_In_Na},
    {"c_In_NO", &ModelParameters::c_In_NO},
    {"c_Sg", &ModelParameters::c_Sg},
    {"c_Og", &ModelParameters::c_Og},
    {"kLa_S", &ModelParameters::kLa_S},
    {"kLa_O", &ModelParameters::kLa_O},
    {"kLa_C", &ModelParameters::kLa_C},
    {"Hpc_S", &ModelParameters::Hpc_S},
    {"Hpc_O", &ModelParameters::Hpc_O},
    {"Hpc_C", &ModelParameters::Hpc_C},
    {"R_gas", &ModelParameters::R_gas},
    {"T_kelvin", &ModelParameters::T_kelvin},
    {"V", &ModelParameters::V},
    {"eps_min", &ModelParameters::eps_min},
};

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text)
{
    text = trim(text);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ConfigError("parameter '" + std::string(key) + "': cannot parse '" + std::string(text) + "' as a number");
    }
    return value;
}

} // namespace

std::vector<std::string> validate_parameters(const ModelParameters& p)
{
    std::vector<std::string> violations;
    for (const auto& field : kNumericFields) {
        if (field.name == "eps_min") {
            continue;
        }
        if (!(p.*field.member > 0.0)) {
            violations.push_back(std::string(field.name) + " must be > 0");
        }
    }
    if (!(p.eps_min > 0.0 && p.eps_min < 0.5)) {
        violations.emplace_back("eps_min must lie in (0, 0.5)");
    }
    return violations;
}

const std::vector<std::string>& parameter_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& field : kNumericFields) {
            k.emplace_back(field.name);
        }
        k.emplace_back("charge_balance");
        k.emplace_back("carbon_balance");
        k.emplace_back("kinetics");
        k.emplace_back("transfer");
        return k;
    }();
    return keys;
}

void set_parameter(ModelParameters& p, std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    if (key == "charge_balance") {
        if (value == "physical") {
            p.charge_balance = ChargeBalance::Physical;
        } else if (value == "paper-literal") {
            p.charge_balance = ChargeBalance::PaperLiteral;
        } else {
            throw ConfigError("charge_balance must be 'physical' or 'paper-literal', got '" + std::string(value) + "'");
        }
        return;
    }
    if (key == "carbon_balance") {
        if (value == "liquid-only") {
            p.carbon_balance = CarbonBalance::LiquidOnly;
        } else if (value == "paper-literal") {
            p.carbon_balance = CarbonBalance::PaperLiteral;
        } else {
            throw ConfigError("carbon_balance must be 'liquid-only' or 'paper-literal', got '" + std::string(value) + "'");
        }
        return;
    }
    if (key == "kinetics" || key == "transfer") {
        bool on = true;
        if (value == "on" || value == "true" || value == "1") {
            on = true;
        } else if (value == "off" || value == "false" || value == "0") {
            on = false;
        } else {
            throw ConfigError(std::string(key) + " must be on/off, got '" + std::string(value) + "'");
        }
        (key == "kinetics" ? p.kinetics : p.transfer) = on;
        return;
    }
    for (const auto& field : kNumericFields) {
        if (field.name == key) {
            p.*field.member = parse_double(key, value);
            return;
        }
    }
    throw ConfigError("unknown model parameter '" + std::string(key) + "'");
}

ModelParameters parse_parameters(std::string_view text)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("parameter file: ") + e.what());
    }

    ModelParameters p;
    for (const auto& [key, node] : tree) {
        if (node.empty()) {
            set_parameter(p, key, node.data());
        } else if (key == "model") {
            for (const auto& [k, v] : node) {
                set_parameter(p, k, v.data());
            }
        } else {
            throw ConfigError("parameter file: unexpected section [" + key + "]");
        }
    }
    return p;
}

ModelParameters load_parameters(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open parameter file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_parameters(buffer.str());
}

std::string_view to_string(ChargeBalance c)
{
    return c == ChargeBalance::Physical ? "physical" : "paper-literal";
}

std::string_view to_string(CarbonBalance c)
{
    return c == CarbonBalance::LiquidOnly ? "liquid-only" : "paper-literal";
}

} // namespace scp
