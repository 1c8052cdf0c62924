#ifndef GWB_WORKSPACE_HPP
#define GWB_WORKSPACE_HPP

#include "gwb/bibundle.hpp"
#include "gwb/bimodule.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace gwb {

/// Parse or schema failure. `where` is a JSON-pointer-style path for schema
/// violations, or "line L, column C" for syntax errors.
struct WorkspaceError : std::runtime_error {
    WorkspaceError(const std::string& where, const std::string& what)
        : std::runtime_error(where + ": " + what), where(where) {}
    std::string where;
};

struct Workspace {
    struct Job {
        std::string command;
        std::vector<std::string> args;
    };
    std::map<std::string, std::shared_ptr<const FiniteGroupoid>> groupoids;
    std::map<std::string, MeasuredGroupoid> measures;
    std::map<std::string, GroupoidFunctor> functors;
    std::map<std::string, Bibundle> bibundles;
    std::map<std::string, Job> jobs;
    // groupoid name lookup by identity, for serialization and reports
    std::map<const FiniteGroupoid*, std::string> groupoid_name;
};

/// Strict-schema load: unknown keys are rejected, all references must
/// resolve, and every loaded object is validated (axiom witnesses are
/// reported through WorkspaceError).
Workspace parse_workspace(const std::string& path);
Workspace parse_workspace_text(const std::string& text);

/// Canonical serialization: every object in explicit table form, keys
/// sorted, rationals canonicalized. serialize(parse(w)) is a fixed point.
std::string serialize_workspace(const Workspace& w);

} // namespace gwb

#endif
