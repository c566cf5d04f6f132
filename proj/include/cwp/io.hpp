#ifndef CWP_IO_HPP
#define CWP_IO_HPP

#include <string>

#include "cwp/group.hpp"
#include "cwp/program.hpp"

namespace cwp {

// Group file: line-based, '#' comments.
//   factor <name> rank <r>
//   extragen <factor> <name> = <int> <int> ...
//   constants delta=<d> K=<k> L=<l> e1=<..> e2=<..> eprime=<..> ff=<slope>,<intercept>
GroupContext parse_group(const std::string& text);
std::string serialize_group(const GroupContext& ctx);

// Program file: first directive `start A`; one production per line:
//   A = 'x' 'y' B C
//   A = cut B 3 7          (compressed indices)
//   A = rawcut B 1 3       (raw indices)
//   A = tether B | 'a' 'b' | 'c' 'd'
// Quoted tokens are letters, bare identifiers variables; '#' comments.
Program parse_program(const std::string& text, AlphabetRef alphabet,
                      int tether_bound = 0);
std::string serialize_program(const Program& p);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace cwp

#endif
