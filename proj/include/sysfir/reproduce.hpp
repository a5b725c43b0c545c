#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sysfir/config.hpp"
#include "sysfir/io.hpp"

namespace sysfir {

struct Check {
    std::string name;
    bool pass{};
    json detail;
};

/// Artifacts keyed by relative path; contents are byte-deterministic.
struct ReproduceResult {
    std::vector<Check> checks;
    std::map<std::string, std::string> artifacts;

    bool pass() const;
};

struct ReproduceOptions {
    std::size_t random_samples{100000};
    std::size_t oracle_samples{2048};
    std::uint64_t seed{0x5eed'f1a7'0000'0001ULL};
};

/// End-to-end pipeline: tap estimate, design, both quantizations, every
/// break variant, width validation, overflow-free simulation, oracle
/// equivalence, representation comparison and HDL emission.
ReproduceResult reproduce_paper(const ProjectConfig& config, const std::optional<DeviceProfile>& profile,
                                const ReproduceOptions& options = {});

} // namespace sysfir
