#pragma once

#include "interp/types.hpp"

#include <string>
#include <variant>

namespace interp {

enum class DatasetKind { Function, Operator };

using AnyDataset = std::variant<FuncDataset, OpDataset>;

/// Parses {"kind":"function"|"operator","d":int,"samples":[...]} and validates.
AnyDataset load_dataset(const std::string& path);
FuncDataset load_function_dataset(const std::string& path);
OpDataset load_operator_dataset(const std::string& path);

AnyDataset parse_dataset(const std::string& text);

std::string dataset_to_json(const FuncDataset& ds);
std::string dataset_to_json(const OpDataset& ds);

void save_dataset(const FuncDataset& ds, const std::string& path);
void save_dataset(const OpDataset& ds, const std::string& path);

}  // namespace interp
