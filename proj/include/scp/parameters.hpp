#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace scp
{

enum class ChargeBalance { Physical, PaperLiteral };
enum class CarbonBalance { LiquidOnly, PaperLiteral };

/**
 * Model constants for methanotrophic growth in a stirred tank.
 *
 * Concentrations are mol/L, rates 1/h, Henry constants atm/M. Defaults are the
 * laboratory-reactor values; the two balance options select how the charge and
 * carbon balances are written (see equilibrium.hpp).
 */
struct ModelParameters
{
    // growth kinetics
    double mu_max = 2.28e-1;
    double m = 9.80e-5;
    double alpha = 2.00e-2;
    double delta = 2.00e-2;
    double K_S = 7.50e-5;
    double K_Nox = 3.30e-3;
    double K_O = 5.50e-5;
    double K_N = 1.30e-3;

    // equilibrium constants
    double K_eW = 1.00e-14;
    double K_eN = 5.62e-10;
    double K_eC1 = 1.58e-7;
    double K_eC2 = 4.27e-7;
    double K_eC3 = 4.79e-11;

    // inlet concentrations
    double c_In_N = 5.88;
    double c_In_Na = 1.00;
    double c_In_NO = 1.00;
    double c_Sg = 1.90e-1;
    double c_Og = 1.90e-1;

    // gas-liquid transfer
    double kLa_S = 3.89e2;
    double kLa_O = 3.71e2;
    double kLa_C = 3.26e2;
    double Hpc_S = 7.05e2;
    double Hpc_O = 7.59e2;
    double Hpc_C = 2.99e1;
    double R_gas = 8.21e-2;
    double T_kelvin = 3.15e2;

    double V = 1.00;

    ChargeBalance charge_balance = ChargeBalance::Physical;
    CarbonBalance carbon_balance = CarbonBalance::LiquidOnly;
    double eps_min = 1e-6;

    /// Switches for ablation studies: growth kinetics and gas-liquid transfer.
    bool kinetics = true;
    bool transfer = true;
};

/// Returns one message per violated constraint; empty means valid.
std::vector<std::string> validate_parameters(const ModelParameters& p);

/// Sets one parameter by its table name. Throws ConfigError on unknown key or bad value.
void set_parameter(ModelParameters& p, std::string_view key, std::string_view value);

/// Every key accepted by set_parameter.
const std::vector<std::string>& parameter_keys();

/**
 * Parses `key = value` lines, either at top level or inside a `[model]` section.
 * Unknown keys and other sections are rejected.
 */
ModelParameters parse_parameters(std::string_view text);
ModelParameters load_parameters(const std::filesystem::path& path);

std::string_view to_string(ChargeBalance c);
std::string_view to_string(CarbonBalance c);

} // namespace scp
