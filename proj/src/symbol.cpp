#include "qpc/symbol.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace qpc {

namespace {

struct Table {
    std::mutex mu;
    std::deque<std::string> names{""};  // id 0 is the empty placeholder
    std::unordered_map<std::string, std::uint32_t> ids;
};

Table& table() {
    static Table t;
    return t;
}

}  // namespace

Symbol::Symbol(std::string_view name) {
    auto& t = table();
    std::lock_guard lock(t.mu);
    auto it = t.ids.find(std::string(name));
    if (it != t.ids.end()) {
        id_ = it->second;
        return;
    }
    id_ = static_cast<std::uint32_t>(t.names.size());
    t.names.emplace_back(name);
    t.ids.emplace(std::string(name), id_);
}

const std::string& Symbol::name() const {
    auto& t = table();
    std::lock_guard lock(t.mu);
    // deque never relocates elements, so the reference outlives the lock
    return t.names[id_];
}

bool natural_less(std::string_view a, std::string_view b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        bool da = std::isdigit(static_cast<unsigned char>(a[i]));
        bool db = std::isdigit(static_cast<unsigned char>(b[j]));
        if (da && db) {
            std::size_t ie = i, je = j;
            while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
            while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
            auto na = a.substr(i, ie - i), nb = b.substr(j, je - j);
            while (na.size() > 1 && na[0] == '0') na.remove_prefix(1);
            while (nb.size() > 1 && nb[0] == '0') nb.remove_prefix(1);
            if (na.size() != nb.size()) return na.size() < nb.size();
            if (na != nb) return na < nb;
            i = ie;
            j = je;
            continue;
        }
        if (a[i] != b[j]) return a[i] < b[j];
        ++i;
        ++j;
    }
    if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
    return a < b;
}

}  // namespace qpc
