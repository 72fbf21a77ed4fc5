#pragma once

#include "sphsync/types.hpp"

#include <filesystem>
#include <iosfwd>

namespace sphsync {

// Text formats.
//
// Matrix: first line "n"; then one line per stored entry "i j value"
// (complex: "i j re im") with 1-based indices and i <= j. Unlisted entries
// are zero and the lower triangle is completed by symmetry (Hermitian
// conjugation for complex entries). Blank lines and lines starting with '#'
// are ignored on input.
//
// Sign vector: first line "n"; then n lines of +1 / -1 (complex: "re im").
//
// Sphere configuration: first line "n r"; then n lines with r values
// (complex: r pairs "re im").

SymmetricCost read_cost(std::istream& in);
SymmetricCost read_cost(const std::filesystem::path& path);
void write_cost(std::ostream& out, const SymmetricCost& c);
void write_cost(const std::filesystem::path& path, const SymmetricCost& c);

SignVector read_signs(std::istream& in);
SignVector read_signs(const std::filesystem::path& path);
void write_signs(std::ostream& out, const SignVector& z);
void write_signs(const std::filesystem::path& path, const SignVector& z);

SphereConfig read_config(std::istream& in);
SphereConfig read_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const SphereConfig& y);
void write_config(const std::filesystem::path& path, const SphereConfig& y);

}  // namespace sphsync
