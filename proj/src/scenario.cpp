#include "huuzlee/scenario.hpp"

#include <cctype>

#include "huuzlee/parser.hpp"
#include "huuzlee/validate.hpp"

namespace huuzlee::runtime {

namespace {

[[noreturn]] void fail(Position pos, const std::string& msg) { throw SyntaxError("ScenarioError", pos, msg); }

class LineReader {
public:
    LineReader(std::string_view line, Position pos) : s_(line), pos_(pos) {}

    bool done() {
        skip();
        return i_ >= s_.size();
    }

    std::string word(const char* what) {
        skip();
        std::size_t b = i_;
        while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '{') ++i_;
        if (b == i_) fail(at(b), std::string("expected ") + what);
        return std::string(s_.substr(b, i_ - b));
    }

    // The text of a balanced `{...}` group, braces included. Quoted strings
    // may contain braces.
    std::string braces() {
        skip();
        std::size_t b = i_;
        if (i_ >= s_.size() || s_[i_] != '{') fail(at(i_), "expected '{'");
        bool quoted = false;
        for (; i_ < s_.size(); ++i_) {
            char c = s_[i_];
            if (quoted) {
                if (c == '\\') ++i_;
                else if (c == '"') quoted = false;
            } else if (c == '"') {
                quoted = true;
            } else if (c == '}') {
                ++i_;
                return std::string(s_.substr(b, i_ - b));
            }
        }
        fail(at(b), "unterminated '{'");
    }

    Position at(std::size_t i) const { return {pos_.line, static_cast<std::uint32_t>(i + 1)}; }
    Position here() { skip(); return at(i_); }

private:
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    std::string_view s_;
    Position pos_;
    std::size_t i_ = 0;
};

bool is_name(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    return true;
}

Value parse_value(std::string_view text, Position pos) {
    if (text == "?") return Unbound{};
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
        std::string out;
        for (std::size_t i = 1; i + 1 < text.size(); ++i) {
            if (text[i] == '\\' && i + 2 < text.size()) ++i;
            out += text[i];
        }
        return out;
    }
    if (auto d = Decimal::parse(text)) return *d;
    if (is_name(text)) return Address{std::string(text)};
    fail(pos, "bad value '" + std::string(text) + "'");
}

} // namespace

Payload parse_payload(std::string_view text, Position pos) {
    if (text.size() < 2 || text.front() != '{' || text.back() != '}') fail(pos, "expected '{...}'");
    std::string_view body = text.substr(1, text.size() - 2);
    Payload out;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    };
    while (true) {
        skip();
        if (i >= body.size()) break;
        std::size_t kb = i;
        while (i < body.size() && body[i] != ':' && !std::isspace(static_cast<unsigned char>(body[i]))) ++i;
        std::string key(body.substr(kb, i - kb));
        skip();
        if (key.empty() || i >= body.size() || body[i] != ':') fail(pos, "expected 'field: value'");
        ++i;
        skip();
        std::size_t vb = i;
        if (i < body.size() && body[i] == '"') {
            for (++i; i < body.size() && body[i] != '"'; ++i)
                if (body[i] == '\\') ++i;
            if (i >= body.size()) fail(pos, "unterminated string");
            ++i;
        } else {
            while (i < body.size() && body[i] != ',' && !std::isspace(static_cast<unsigned char>(body[i]))) ++i;
        }
        std::string_view raw = body.substr(vb, i - vb);
        if (raw.empty()) fail(pos, "missing value for '" + key + "'");
        if (!out.emplace(key, parse_value(raw, pos)).second) fail(pos, "field '" + key + "' given twice");
        skip();
        if (i < body.size()) {
            if (body[i] != ',') fail(pos, "expected ','");
            ++i;
        }
    }
    return out;
}

Scenario parse_scenario(const SourceUnit& src, const std::filesystem::path& base_dir) {
    Scenario sc;
    std::uint32_t lineno = 0;
    std::size_t start = 0;
    while (start <= src.text.size()) {
        auto end = src.text.find('\n', start);
        if (end == std::string::npos) end = src.text.size();
        std::string_view line = std::string_view(src.text).substr(start, end - start);
        start = end + 1;
        ++lineno;
        LineReader r(line, {lineno, 1});
        if (r.done()) continue;
        Position pos = r.here();
        std::string kw = r.word("directive");
        if (kw.rfind("#", 0) == 0 || kw.rfind("//", 0) == 0) continue;
        if (kw == "SPAWN") {
            SpawnDirective d;
            d.pos = pos;
            d.address = Address{r.word("address")};
            d.contract = base_dir / r.word("contract path");
            bool in_with = false;
            while (!r.done()) {
                Position at = r.here();
                std::string w = r.word("WITH, INIT or fragment path");
                if (w == "WITH") {
                    in_with = true;
                } else if (w == "INIT") {
                    d.init = parse_payload(r.braces(), at);
                    in_with = false;
                } else if (in_with) {
                    d.fragments.push_back(base_dir / w);
                } else {
                    fail(at, "expected WITH or INIT, got '" + w + "'");
                }
            }
            sc.directives.emplace_back(std::move(d));
        } else if (kw == "SEND") {
            SendDirective d;
            d.pos = pos;
            d.envelope.sender = Address{r.word("sender")};
            d.envelope.to = Address{r.word("destination")};
            d.envelope.message_type = r.word("message type");
            Position at = r.here();
            d.envelope.payload = r.done() ? Payload{} : parse_payload(r.braces(), at);
            if (!r.done()) fail(r.here(), "trailing text");
            sc.directives.emplace_back(std::move(d));
        } else if (kw == "RUN") {
            Position at = r.here();
            std::string n = r.word("tick count");
            if (n.empty() || n.find_first_not_of("0123456789") != std::string::npos || n.size() > 12 || std::stoull(n) == 0)
                fail(at, "RUN needs a positive tick count");
            if (!r.done()) fail(r.here(), "trailing text");
            sc.directives.emplace_back(RunDirective{std::stoull(n), pos});
        } else {
            fail(pos, "unknown directive '" + kw + "'");
        }
    }
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    return parse_scenario(read_source(path), path.parent_path());
}

std::shared_ptr<const CompiledMachine> MachineCache::get(const std::filesystem::path& contract,
                                                         const std::vector<std::filesystem::path>& fragments) {
    std::vector<std::string> key{contract.lexically_normal().string()};
    for (const auto& f : fragments) key.push_back(f.lexically_normal().string());
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    auto def = lang::parse_source(read_source(contract));
    auto m = machine::compile(def);
    std::vector<lang::FragmentDecl> frags;
    for (const auto& f : fragments) frags.push_back(lang::parse_fragment_source(read_source(f)));
    if (!frags.empty()) m = machine::compose_behaviors(m, frags);
    auto ptr = std::make_shared<const CompiledMachine>(std::move(m));
    cache_.emplace(std::move(key), ptr);
    return ptr;
}

bool run_scenario(World& world, const Scenario& sc, MachineCache& cache, const RunOptions& opts) {
    bool ok = true;
    bool ran_last = false;
    for (const auto& d : sc.directives) {
        ran_last = false;
        if (const auto* s = std::get_if<SpawnDirective>(&d)) {
            world.spawn(cache.get(s->contract, s->fragments), s->address, s->init);
        } else if (const auto* s = std::get_if<SendDirective>(&d)) {
            world.deliver(s->envelope);
        } else {
            const auto& r = std::get<RunDirective>(d);
            ok = world.run(opts.max_ticks.value_or(r.max_ticks)) && ok;
            ran_last = true;
        }
    }
    if (!ran_last && !world.quiescent()) ok = world.run(opts.max_ticks.value_or(opts.default_max_ticks)) && ok;
    return ok;
}

std::vector<Envelope> spawn_all(World& world, const Scenario& sc, MachineCache& cache, std::uint64_t max_ticks) {
    std::vector<Envelope> sends;
    for (const auto& d : sc.directives) {
        if (const auto* s = std::get_if<SpawnDirective>(&d))
            world.spawn(cache.get(s->contract, s->fragments), s->address, s->init);
        else if (const auto* s = std::get_if<SendDirective>(&d))
            sends.push_back(s->envelope);
    }
    world.run(max_ticks);
    return sends;
}

} // namespace huuzlee::runtime
