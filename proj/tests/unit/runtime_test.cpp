#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "huuzlee/scenario.hpp"
#include "support.hpp"

using namespace huuzlee;
using namespace huuzlee::runtime;
using huuzlee::testing::compile_corpus;
using huuzlee::testing::corpus;
using huuzlee::testing::offer;

namespace {

std::shared_ptr<const CompiledMachine> fig6() {
    static auto m = std::make_shared<const CompiledMachine>(compile_corpus("figure6.hzl"));
    return m;
}

std::shared_ptr<const CompiledMachine> party() {
    static auto m = std::make_shared<const CompiledMachine>(compile_corpus("party.hzl"));
    return m;
}

World run_file(const std::string& name, std::uint64_t seed = 0, bool* ok = nullptr) {
    World w(seed);
    MachineCache cache;
    bool r = run_scenario(w, load_scenario(corpus(name)), cache);
    if (ok) *ok = r;
    return w;
}

std::string state_of(const World& w, const std::string& addr) {
    const auto* a = w.find(Address{addr});
    return a->machine->states[a->state].name;
}

} // namespace

TEST(Spawn, Figure6RestsInOpen) {
    World w;
    w.spawn(fig6(), Address{"C"});
    EXPECT_EQ(state_of(w, "C"), "Open");
    ASSERT_EQ(w.trace().entries.size(), 1u);
    EXPECT_EQ(w.trace().entries[0].kind, TraceKind::Bootstrap);
    EXPECT_EQ(w.trace().entries[0].state_before, "Initially");
    EXPECT_EQ(w.trace().entries[0].state_after, "Open");
}

TEST(Spawn, AddressInUse) {
    World w;
    w.spawn(fig6(), Address{"C"});
    EXPECT_THROW(w.spawn(party(), Address{"C"}), AddressInUse);
}

TEST(Spawn, InitOverrides) {
    World w;
    w.spawn(fig6(), Address{"C"}, {{"buyoffer.price", *Decimal::parse("3")}});
    EXPECT_EQ(*w.find(Address{"C"})->store.find("buyoffer", "price"), Value{*Decimal::parse("3")});
    EXPECT_THROW(w.spawn(fig6(), Address{"D"}, {{"buyoffer.colour", Unbound{}}}), std::invalid_argument);
}

TEST(Spawn, HundredIsolatedActors) {
    World w;
    for (int i = 0; i < 100; ++i) w.spawn(fig6(), Address{"C" + std::to_string(i)});
    w.deliver(offer("buyoffermsg", "X", "10", "5", "A", "B", "C42"));
    w.run(10);
    for (int i = 0; i < 100; ++i) {
        const auto* a = w.find(Address{"C" + std::to_string(i)});
        EXPECT_EQ(is_bound(*a->store.find("buyoffer", "price")), i == 42) << i;
    }
}

TEST(Deliver, LiveActorMailboxGrows) {
    World w;
    w.spawn(fig6(), Address{"C"});
    w.deliver(offer("buyoffermsg", "X", "10", "5", "A", "B"));
    EXPECT_EQ(w.find(Address{"C"})->mailbox.size(), 1u);
}

TEST(Deliver, UnknownAddressIsDeadLettered) {
    World w;
    w.deliver(offer("buyoffermsg", "X", "10", "5", "A", "B", "Nobody"));
    ASSERT_EQ(w.trace().entries.size(), 1u);
    EXPECT_EQ(w.trace().entries[0].kind, TraceKind::DeadLetter);
    EXPECT_EQ(w.dead_letters(), 1u);
    EXPECT_TRUE(w.run(10));
}

TEST(Deliver, TerminatedActorRejects) {
    auto w = run_file("match.scn");
    ASSERT_TRUE(w.find(Address{"C"})->terminated);
    auto before = w.trace().entries.size();
    w.deliver(offer("buyoffermsg", "X", "10", "5", "A", "B"));
    ASSERT_EQ(w.trace().entries.size(), before + 1);
    const auto& e = w.trace().entries.back();
    EXPECT_EQ(e.status, Status::Rejected);
    EXPECT_EQ(e.reason, "Terminated");
    EXPECT_TRUE(w.find(Address{"C"})->mailbox.empty());
}

TEST(Run, EmptyWorld) {
    World w;
    EXPECT_TRUE(w.run(5));
    EXPECT_TRUE(w.trace().entries.empty());
    EXPECT_EQ(w.trace().ticks, 0u);
    auto empty = run_file("empty.scn");
    EXPECT_TRUE(empty.trace().entries.empty());
    EXPECT_EQ(export_trace(empty.trace()), "");
}

TEST(Run, MatchScenario) {
    bool ok = false;
    auto w = run_file("match.scn", 0, &ok);
    EXPECT_TRUE(ok);
    EXPECT_TRUE(w.find(Address{"C"})->terminated);
    EXPECT_EQ(state_of(w, "C"), "Closed");
    std::vector<std::string> notices;
    for (const auto& e : w.trace().entries)
        if (e.kind == TraceKind::Step && e.envelope.sender == Address{"C"}) notices.push_back(e.actor.name);
    EXPECT_EQ(notices, (std::vector<std::string>{"A", "B"}));
    EXPECT_EQ(*w.find(Address{"A"})->store.find("inbox", "text"),
              Value{std::string("Contract Notice: Buy 5 unit of X at 10 from B")});
    EXPECT_EQ(*w.find(Address{"B"})->store.find("inbox", "text"),
              Value{std::string("Contract Advice: Sell 5 unit of X at 10 to A")});
}

TEST(Run, RevisedOffers) {
    auto w = run_file("revise.scn");
    EXPECT_TRUE(w.find(Address{"C"})->terminated);
    EXPECT_EQ(*w.find(Address{"C"})->store.find("contract", "price"), Value{*Decimal::parse("10")});
}

TEST(Run, VetoScenario) {
    auto w = run_file("veto.scn");
    int vetoed = 0;
    for (const auto& e : w.trace().entries)
        if (e.reason == "PolicyVeto(countryCap)") {
            ++vetoed;
            EXPECT_EQ(e.pre_digest, e.post_digest);
        }
    EXPECT_EQ(vetoed, 2);
    EXPECT_EQ(*w.find(Address{"C"})->store.find("contract", "quantity"), Value{*Decimal::parse("100")});
}

TEST(Run, MaxTicksCutsOff) {
    World w;
    MachineCache cache;
    RunOptions opts;
    opts.max_ticks = 1;
    EXPECT_FALSE(run_scenario(w, load_scenario(corpus("match.scn")), cache, opts));
    EXPECT_TRUE(w.trace().max_ticks_exceeded);
    EXPECT_EQ(w.trace().ticks, 1u);
}

TEST(Run, Deterministic) {
    for (std::uint64_t seed : {0u, 7u, 99u}) {
        auto a = run_file("match.scn", seed);
        auto b = run_file("match.scn", seed);
        EXPECT_EQ(export_trace(a.trace()), export_trace(b.trace()));
        EXPECT_EQ(a.digest(), b.digest());
    }
}

TEST(Run, SeedOnlyPermutesWithinSpawnBatch) {
    // final states agree for every seed even when the interleaving differs
    auto base = run_file("match.scn", 0);
    for (std::uint64_t seed = 1; seed < 20; ++seed) EXPECT_EQ(run_file("match.scn", seed).digest(), base.digest());
}

TEST(Run, TraceExportShape) {
    auto w = run_file("match.scn");
    auto text = export_trace(w.trace());
    EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), w.trace().entries.size());
    EXPECT_NE(text.find("\"type\":\"ContractNotice\""), std::string::npos);
    EXPECT_NE(text.find("\"product\":\"\\\"X\\\"\""), std::string::npos);
}

TEST(Run, DigestDistinguishesStores) {
    World a, b;
    a.spawn(fig6(), Address{"C"});
    b.spawn(fig6(), Address{"C"}, {{"buyoffer.price", *Decimal::parse("1")}});
    World c;
    c.spawn(fig6(), Address{"C"});
    EXPECT_NE(a.digest(), b.digest());
    EXPECT_EQ(a.digest(), c.digest());
}

namespace {

// Random traffic between contracts and parties, including bad destinations.
World flood(std::uint64_t seed, int messages) {
    std::mt19937_64 rng(seed);
    World w(seed);
    for (int i = 0; i < 4; ++i) w.spawn(fig6(), Address{"C" + std::to_string(i)});
    for (const char* p : {"A", "B"}) w.spawn(party(), Address{p});
    const char* dests[] = {"C0", "C1", "C2", "C3", "A", "Z"};
    for (int i = 0; i < messages; ++i) {
        auto type = rng() % 2 ? "buyoffermsg" : "selloffermsg";
        auto env = offer(type, rng() % 2 ? "X" : "Y", std::to_string(9 + rng() % 2), "5", "A", "B", dests[rng() % 6]);
        w.deliver(env);
        if (rng() % 3 == 0) w.run(1 + rng() % 3);
    }
    return w;
}

} // namespace

TEST(RunProperty, Conservation) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto w = flood(seed, 60);
        EXPECT_EQ(w.created(), w.consumed() + w.dead_letters() + w.pending()) << seed;
        w.run(100000);
        EXPECT_EQ(w.pending(), 0u);
        EXPECT_EQ(w.created(), w.consumed() + w.dead_letters()) << seed;
        std::uint64_t steps = 0;
        for (const auto& e : w.trace().entries) steps += e.kind == TraceKind::Step;
        EXPECT_EQ(steps, w.consumed());
    }
}

TEST(RunProperty, Isolation) {
    auto w = flood(5, 40);
    while (!w.quiescent()) {
        std::map<std::string, std::string> before;
        for (const auto& a : w.actors()) before[a.address.name] = actor_digest(a);
        auto n = w.trace().entries.size();
        w.run(1);
        std::set<std::string> stepped;
        for (std::size_t i = n; i < w.trace().entries.size(); ++i)
            if (w.trace().entries[i].kind == TraceKind::Step) stepped.insert(w.trace().entries[i].actor.name);
        EXPECT_LE(stepped.size(), 1u);
        for (const auto& a : w.actors())
            if (!stepped.count(a.address.name)) EXPECT_EQ(before[a.address.name], actor_digest(a)) << a.address.name;
    }
}

TEST(RunProperty, TicksStrictlyOrdered) {
    auto w = flood(8, 80);
    w.run(100000);
    std::uint64_t last = 0;
    for (const auto& e : w.trace().entries) {
        EXPECT_GE(e.tick, last);
        last = e.tick;
    }
}

TEST(Scenario, ParsesDirectives) {
    auto sc = parse_scenario({"# c\nSPAWN C a.hzl WITH x.bhv y.bhv INIT {contract.price: 10, contract.buyer: A}\n"
                              "SEND A C m {t: \"a, b\", n: -1.50, u: ?}\nRUN 5\n",
                              "inline"},
                             "/base");
    ASSERT_EQ(sc.directives.size(), 3u);
    const auto& s = std::get<SpawnDirective>(sc.directives[0]);
    EXPECT_EQ(s.contract, std::filesystem::path("/base/a.hzl"));
    EXPECT_EQ(s.fragments.size(), 2u);
    EXPECT_EQ(s.init.at("contract.buyer"), Value{Address{"A"}});
    const auto& m = std::get<SendDirective>(sc.directives[1]).envelope;
    EXPECT_EQ(m.payload.at("t"), Value{std::string("a, b")});
    EXPECT_EQ(m.payload.at("n"), Value{*Decimal::parse("-1.5")});
    EXPECT_FALSE(is_bound(m.payload.at("u")));
    EXPECT_EQ(std::get<RunDirective>(sc.directives[2]).max_ticks, 5u);
}

TEST(Scenario, Errors) {
    for (const char* bad : {"FLY C", "SPAWN C", "SEND A C", "RUN 0", "RUN x", "SEND A C m {a 1}", "SEND A C m {a: 1",
                            "SPAWN C a.hzl BOGUS", "SEND A C m {a: 1, a: 2}", "SEND A C m {a: $}"}) {
        try {
            parse_scenario({bad, "inline"}, ".");
            ADD_FAILURE() << bad;
        } catch (const SyntaxError& e) {
            EXPECT_EQ(e.code(), "ScenarioError") << bad;
            EXPECT_EQ(e.position().line, 1u);
        }
    }
}
