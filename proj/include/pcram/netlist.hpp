#pragma once

#include "pcram/circuit.hpp"

#include <iosfwd>
#include <string>

namespace pcram {

struct ParseError : std::runtime_error {
    ParseError(size_t line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_no(line) {}
    size_t line_no;
};

/// Text netlist, line oriented:
///   circuit <name> inputs=<n> outputs=<m>
///   g<id> = <KIND>(<arg>,...)      args are x<i> (1-based) or g<id>
///   outputs: <arg>,...
/// '#' starts a comment; blank lines are ignored.
std::string serialize(const Circuit& c);
void serialize(const Circuit& c, std::ostream& os);

/// Parses a netlist. Gate lines may appear in any order; the graph is
/// re-validated and topologically ordered, never trusted from the file.
/// Throws ParseError with a line number on malformed input.
Circuit deserialize(const std::string& text);
Circuit deserialize(std::istream& is);

Circuit read_netlist_file(const std::string& path);
void write_netlist_file(const Circuit& c, const std::string& path);

} // namespace pcram
