#pragma once

#include <stdexcept>
#include <string>

namespace fibdrift {

// Single exception type for the whole library.  `kind` is the stable
// machine-readable tag that ends up in {stage, error_kind, detail} records;
// `stage` names the pipeline step that threw.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, std::string stage, std::string detail)
        : std::runtime_error(kind + " [" + stage + "]: " + detail),
          kind_(std::move(kind)),
          stage_(std::move(stage)),
          detail_(std::move(detail)) {}

    const std::string& kind() const { return kind_; }
    const std::string& stage() const { return stage_; }
    const std::string& detail() const { return detail_; }

  private:
    std::string kind_, stage_, detail_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& stage,
                              const std::string& detail) {
    throw Error(kind, stage, detail);
}

}  // namespace fibdrift
