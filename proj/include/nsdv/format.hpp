#pragma once

#include <string>

namespace nsdv {

/// Shortest round-trip decimal form ("0.1", "1e-08", "nan", "inf").
std::string format_double(double x);

/// Parses a full decimal string; returns false on trailing garbage.
bool parse_double(const std::string& s, double& out);

/// 64-bit FNV-1a.
unsigned long long fnv1a64(const std::string& data);

}  // namespace nsdv
