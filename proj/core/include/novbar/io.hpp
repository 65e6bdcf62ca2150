#pragma once

#include <string>

#include "novbar/barcode.hpp"
#include "novbar/cyclic.hpp"
#include "novbar/eggbeater.hpp"

namespace novbar {

// JSON artifacts: deterministic key order and formatting, every document
// stamped with a schema version, rationals carried exactly (never floats).

std::string complex_to_json(const filtered_chain_complex& c);
filtered_chain_complex complex_from_json(const std::string& text);

std::string map_to_json(const filtered_map& m);
filtered_map map_from_json(const std::string& text);

std::string barcode_to_json(const barcode& bc);
barcode barcode_from_json(const std::string& text);
std::string barcode_to_csv(const barcode& bc);

std::string svd_to_json(const filtered_map& m, const svd_result& dec);
std::string egg_report_to_json(const egg_report& report);
std::string fixture_to_json(const cyclic_action_data& data, std::size_t size,
                            std::uint64_t seed);
std::string p_tuple_to_json(const p_tuple_svd& dec);
std::string verify_report_to_json(const complex_report& report);
std::string product_report_to_json(unsigned p, const std::vector<long>& betti,
                                   unsigned chern_number,
                                   const product_multiplicity_result& result);
std::string crosscheck_to_json(const crosscheck_result& result);
std::string stability_to_json(const stability_report& report);

} // namespace novbar
