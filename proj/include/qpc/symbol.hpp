#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace qpc {

// Interned generator name. Ids are process-local and only used for fast
// comparison; anything user-visible is ordered by name, never by id.
class Symbol {
public:
    Symbol() = default;
    explicit Symbol(std::string_view name);

    std::uint32_t id() const { return id_; }
    const std::string& name() const;

    friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
    friend auto operator<=>(Symbol a, Symbol b) { return a.id_ <=> b.id_; }

private:
    std::uint32_t id_ = 0;
};

// Natural order on names: "y2" < "y10", letters compared case-sensitively.
bool natural_less(std::string_view a, std::string_view b);

}  // namespace qpc
