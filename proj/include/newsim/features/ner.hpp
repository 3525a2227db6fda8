#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace newsim::features {

// A recognized span. Offsets are byte offsets into the source text and
// text == source.substr(start, end - start).
struct Entity {
    std::string text;
    std::string label; // LOCATION, PERSON, ORGANIZATION, MISC, DATE, TIME, ...
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const Entity&) const = default;
};

// Named-entity recognizer behind which real taggers plug in. recognize must be
// deterministic for a fixed instance and input; failures throw (they are
// reported as ProviderError by the feature extractor).
class NerProvider {
public:
    virtual ~NerProvider() = default;

    virtual std::string name() const = 0;
    virtual std::set<std::string> supported_languages() const = 0;
    virtual std::vector<Entity> recognize(std::string_view text, std::string_view language) const = 0;

    // False if recognize must not be called concurrently.
    virtual bool concurrent_safe() const { return true; }
};

} // namespace newsim::features
