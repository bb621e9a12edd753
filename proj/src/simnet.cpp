#include "chiplet/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <vector>

#include "chiplet/errors.hpp"

namespace chiplet {

void SimConfig::validate() const {
    require(link_latency_cycles >= 1, "link latency must be >= 1 cycle");
    require(router_latency_cycles >= 1, "router latency must be >= 1 cycle");
    require(num_vcs >= 1, "at least one virtual channel is required");
    require(buffer_flits_per_vc >= 1, "buffers must hold at least one flit");
    require(endpoints_per_chiplet >= 1, "at least one endpoint per chiplet is required");
    require(packet_len_flits >= 1, "packets must have at least one flit");
    require(warmup_cycles >= 0 && measure_cycles >= 1 && drain_cycles >= 1, "phase lengths must be positive");
    require(escape_after_cycles >= 1, "escape threshold must be >= 1 cycle");
    require(injection_rate > 0.0 && injection_rate <= 1.0, "injection rate must lie in (0, 1]");
}

RoutingTables compute_routes(const AdjacencyGraph& g) {
    const int n = g.n_vertices();
    require(n >= 1, "graph has no vertices");
    RoutingTables t;
    t.n = n;
    const auto cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    t.dist.assign(cells, -1);
    t.next_hop.assign(cells, -1);
    t.escape_next.assign(cells, -1);

    for (int v = 0; v < n; ++v) {
        const auto d = g.bfs_distances(v);
        for (int u = 0; u < n; ++u) {
            if (d[static_cast<std::size_t>(u)] < 0) fail(ErrorCode::Disconnected, "graph is not connected");
            t.dist[static_cast<std::size_t>(v) * static_cast<std::size_t>(n) + static_cast<std::size_t>(u)] =
                d[static_cast<std::size_t>(u)];
        }
    }
    for (int cur = 0; cur < n; ++cur) {
        for (int dst = 0; dst < n; ++dst) {
            if (cur == dst) continue;
            const int remaining = t.distance(cur, dst);
            for (int nb : g.neighbors(cur)) {  // ascending, so the first match is the smallest id
                if (t.distance(nb, dst) == remaining - 1) {
                    t.next_hop[static_cast<std::size_t>(cur) * static_cast<std::size_t>(n) + static_cast<std::size_t>(dst)] = nb;
                    break;
                }
            }
        }
    }

    // BFS spanning tree from vertex 0; a vertex's parent is its first discoverer.
    t.tree_parent.assign(static_cast<std::size_t>(n), -1);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::deque<int> frontier{0};
    seen[0] = 1;
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop_front();
        for (int w : g.neighbors(v)) {
            if (seen[static_cast<std::size_t>(w)]) continue;
            seen[static_cast<std::size_t>(w)] = 1;
            t.tree_parent[static_cast<std::size_t>(w)] = v;
            frontier.push_back(w);
        }
    }
    // Tree path cur -> dst: down toward dst when cur is one of its ancestors,
    // otherwise up to the parent.
    std::vector<int> child_toward(static_cast<std::size_t>(n));
    for (int dst = 0; dst < n; ++dst) {
        std::fill(child_toward.begin(), child_toward.end(), -1);
        for (int v = dst; t.tree_parent[static_cast<std::size_t>(v)] >= 0; v = t.tree_parent[static_cast<std::size_t>(v)]) {
            child_toward[static_cast<std::size_t>(t.tree_parent[static_cast<std::size_t>(v)])] = v;
        }
        for (int cur = 0; cur < n; ++cur) {
            if (cur == dst) continue;
            const int down = child_toward[static_cast<std::size_t>(cur)];
            t.escape_next[static_cast<std::size_t>(cur) * static_cast<std::size_t>(n) + static_cast<std::size_t>(dst)] =
                down >= 0 ? down : t.tree_parent[static_cast<std::size_t>(cur)];
        }
    }
    return t;
}

namespace {

struct Flit {
    std::int32_t packet = 0;
    std::int32_t ready = 0;  // first cycle the flit may leave its router
    bool head = false;
    bool tail = false;
};

struct Packet {
    int dst_endpoint = 0;
    int dst_router = 0;
    std::int64_t created = 0;
    bool measured = false;
    bool escape = false;
};

struct LinkFlit {
    std::int64_t arrival;
    Flit flit;
    int vc;
};

struct Credit {
    std::int64_t arrival;
    int vc;
};

// Fixed-capacity FIFO; capacity is known up front for buffers and links.
template <class T>
class Ring {
public:
    explicit Ring(std::size_t capacity = 0) : slots_(capacity) {}
    bool empty() const noexcept { return count_ == 0; }
    std::size_t size() const noexcept { return count_; }
    const T& front() const { return slots_[head_]; }
    void push(const T& item) {
        slots_[(head_ + count_) % slots_.size()] = item;
        ++count_;
    }
    T pop() {
        T item = slots_[head_];
        head_ = (head_ + 1) % slots_.size();
        --count_;
        return item;
    }

private:
    std::vector<T> slots_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
};

struct InputVc {
    Ring<Flit> buffer;
    int out_port = -1;  // -1 until the head at the front is routed
    int out_vc = -1;
    std::int64_t waiting_since = -1;
};

struct Endpoint {
    std::deque<int> source;  // packets not yet fully injected
    int flits_sent = 0;      // of the front packet
};

struct RunLimits {
    // Stop after the measurement window when the mean source backlog per
    // endpoint exceeds this many flits (<= 0 disables the check).
    double max_mean_backlog = 0.0;
};

class Network {
public:
    Network(const Arrangement& arr, const SimConfig& cfg, const RoutingTables& routes)
        : cfg_(cfg), n_(arr.graph.n_vertices()), eps_(cfg.endpoints_per_chiplet),
          vcs_(cfg.num_vcs), depth_(cfg.buffer_flits_per_vc), rng_(cfg.seed) {
        const AdjacencyGraph& g = arr.graph;
        port_base_.resize(static_cast<std::size_t>(n_) + 1, 0);
        degree_.resize(static_cast<std::size_t>(n_));
        for (int r = 0; r < n_; ++r) {
            degree_[static_cast<std::size_t>(r)] = g.degree(r);
            port_base_[static_cast<std::size_t>(r) + 1] = port_base_[static_cast<std::size_t>(r)] + g.degree(r) + eps_;
        }
        const int total_ports = port_base_.back();
        peer_router_.assign(static_cast<std::size_t>(total_ports), -1);
        peer_port_.assign(static_cast<std::size_t>(total_ports), -1);
        for (int r = 0; r < n_; ++r) {
            const auto nbs = g.neighbors(r);
            for (int p = 0; p < static_cast<int>(nbs.size()); ++p) {
                const int nb = nbs[static_cast<std::size_t>(p)];
                const auto back = g.neighbors(nb);
                const int q = static_cast<int>(std::lower_bound(back.begin(), back.end(), r) - back.begin());
                peer_router_[static_cast<std::size_t>(gport(r, p))] = nb;
                peer_port_[static_cast<std::size_t>(gport(r, p))] = q;
            }
        }

        // Output port toward each destination router, for both route sets.
        const auto cells = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
        minimal_port_.assign(cells, -1);
        escape_port_.assign(cells, -1);
        for (int r = 0; r < n_; ++r) {
            const auto nbs = g.neighbors(r);
            const auto port_of = [&](int nb) {
                return static_cast<int>(std::lower_bound(nbs.begin(), nbs.end(), nb) - nbs.begin());
            };
            for (int d = 0; d < n_; ++d) {
                if (d == r) continue;
                minimal_port_[cell(r, d)] = port_of(routes.next(r, d));
                escape_port_[cell(r, d)] = port_of(routes.escape(r, d));
            }
        }

        inputs_.reserve(static_cast<std::size_t>(total_ports) * static_cast<std::size_t>(vcs_));
        for (int i = 0; i < total_ports * vcs_; ++i) inputs_.push_back(InputVc{Ring<Flit>(static_cast<std::size_t>(depth_))});
        credits_.assign(static_cast<std::size_t>(total_ports) * static_cast<std::size_t>(vcs_), depth_);
        owner_.assign(static_cast<std::size_t>(total_ports) * static_cast<std::size_t>(vcs_), -1);
        links_.reserve(static_cast<std::size_t>(total_ports));
        credit_links_.reserve(static_cast<std::size_t>(total_ports));
        const auto link_cap = static_cast<std::size_t>(cfg.link_latency_cycles) + 2;
        for (int i = 0; i < total_ports; ++i) {
            links_.emplace_back(link_cap);
            credit_links_.emplace_back(link_cap);
        }
        rr_vc_.assign(static_cast<std::size_t>(total_ports), 0);
        rr_out_.assign(static_cast<std::size_t>(total_ports), 0);
        rr_va_.assign(static_cast<std::size_t>(n_), 0);
        buffered_.assign(static_cast<std::size_t>(n_), 0);
        endpoints_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(eps_));
    }

    SimResult run(const RunLimits& limits) {
        const std::int64_t measure_start = cfg_.warmup_cycles;
        const std::int64_t measure_end = measure_start + cfg_.measure_cycles;
        const std::int64_t hard_stop = measure_end + cfg_.drain_cycles;
        measure_end_ = measure_end;
        const double packet_prob = cfg_.injection_rate / cfg_.packet_len_flits;
        const int total_endpoints = n_ * eps_;

        SimResult res;
        res.injection_rate = cfg_.injection_rate;
        bool aborted = false;
        for (now_ = 0; now_ < hard_stop; ++now_) {
            if (now_ >= measure_end && outstanding() == 0) break;
            if (now_ == measure_end && limits.max_mean_backlog > 0.0 &&
                static_cast<double>(backlog_flits()) / total_endpoints > limits.max_mean_backlog) {
                aborted = true;
                break;
            }
            deliver();
            if (now_ < measure_end) generate(packet_prob, now_ >= measure_start);
            inject();
            for (int r = 0; r < n_; ++r) {
                if (buffered_[static_cast<std::size_t>(r)] == 0) continue;
                allocate(r);
                switch_traverse(r);
            }
        }

        res.cycles_run = now_;
        res.drained = !aborted && outstanding() == 0;
        res.packets_created = packets_created_;
        res.packets_ejected = packets_ejected_;
        res.flits_created = flits_created_;
        res.flits_ejected = flits_ejected_;
        res.escape_packets = escape_packets_;
        res.max_vc_occupancy = max_occupancy_;
        res.packets_measured = measured_ejected_;
        res.avg_packet_latency_cycles =
            measured_ejected_ > 0 ? static_cast<double>(latency_sum_) / static_cast<double>(measured_ejected_) : 0.0;
        const double window = static_cast<double>(total_endpoints) * cfg_.measure_cycles;
        res.offered_rate = static_cast<double>(measured_flits_created_) / window;
        res.accepted_rate = static_cast<double>(measured_flits_accepted_) / window;
        res.saturated = !res.drained || res.accepted_rate < 0.95 * res.offered_rate;
        return res;
    }

private:
    int gport(int r, int p) const { return port_base_[static_cast<std::size_t>(r)] + p; }
    std::size_t vc_index(int r, int p, int vc) const {
        return static_cast<std::size_t>(gport(r, p)) * static_cast<std::size_t>(vcs_) + static_cast<std::size_t>(vc);
    }
    std::size_t cell(int r, int d) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(d);
    }
    long long outstanding() const { return packets_created_ - packets_ejected_; }

    long long backlog_flits() const {
        long long total = 0;
        for (const auto& ep : endpoints_) {
            total += static_cast<long long>(ep.source.size()) * cfg_.packet_len_flits - ep.flits_sent;
        }
        return total;
    }

    void push_input(int r, int p, int vc, Flit flit) {
        InputVc& in = inputs_[vc_index(r, p, vc)];
        flit.ready = static_cast<std::int32_t>(now_ + cfg_.router_latency_cycles);
        in.buffer.push(flit);
        max_occupancy_ = std::max(max_occupancy_, static_cast<int>(in.buffer.size()));
        ++buffered_[static_cast<std::size_t>(r)];
    }

    void deliver() {
        const int total_ports = port_base_.back();
        for (int gp = 0; gp < total_ports; ++gp) {
            const int peer = peer_router_[static_cast<std::size_t>(gp)];
            if (peer < 0) continue;
            const int peer_port = peer_port_[static_cast<std::size_t>(gp)];
            auto& link = links_[static_cast<std::size_t>(gp)];
            while (!link.empty() && link.front().arrival == now_) {
                const LinkFlit lf = link.pop();
                push_input(peer, peer_port, lf.vc, lf.flit);
            }
            auto& credit_link = credit_links_[static_cast<std::size_t>(gp)];
            while (!credit_link.empty() && credit_link.front().arrival == now_) {
                const Credit c = credit_link.pop();
                ++credits_[vc_index(peer, peer_port, c.vc)];
            }
        }
    }

    int new_packet() {
        if (!free_packets_.empty()) {
            const int id = free_packets_.back();
            free_packets_.pop_back();
            return id;
        }
        packets_.emplace_back();
        return static_cast<int>(packets_.size()) - 1;
    }

    void generate(double packet_prob, bool measured) {
        const int total = n_ * eps_;
        for (int e = 0; e < total; ++e) {
            const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
            if (u >= packet_prob) continue;
            int dst = static_cast<int>(rng_() % static_cast<std::uint64_t>(total - 1));
            if (dst >= e) ++dst;
            const int id = new_packet();
            Packet& pk = packets_[static_cast<std::size_t>(id)];
            pk.dst_endpoint = dst;
            pk.dst_router = dst / eps_;
            pk.created = now_;
            pk.measured = measured;
            pk.escape = false;
            endpoints_[static_cast<std::size_t>(e)].source.push_back(id);
            ++packets_created_;
            flits_created_ += cfg_.packet_len_flits;
            if (measured) measured_flits_created_ += cfg_.packet_len_flits;
        }
    }

    void inject() {
        const int total = n_ * eps_;
        for (int e = 0; e < total; ++e) {
            Endpoint& ep = endpoints_[static_cast<std::size_t>(e)];
            if (ep.source.empty()) continue;
            const int r = e / eps_;
            const int port = degree_[static_cast<std::size_t>(r)] + e % eps_;
            if (inputs_[vc_index(r, port, 0)].buffer.size() >= static_cast<std::size_t>(depth_)) continue;
            Flit flit;
            flit.packet = ep.source.front();
            flit.head = ep.flits_sent == 0;
            flit.tail = ep.flits_sent == cfg_.packet_len_flits - 1;
            push_input(r, port, 0, flit);
            if (flit.tail) {
                ep.source.pop_front();
                ep.flits_sent = 0;
            } else {
                ++ep.flits_sent;
            }
        }
    }

    // Free output VC on `port` among [first, last] with the most credits.
    int pick_vc(int r, int port, int first, int last) const {
        int best = -1;
        int best_credits = -1;
        for (int vc = first; vc <= last; ++vc) {
            const std::size_t idx = vc_index(r, port, vc);
            if (owner_[idx] >= 0) continue;
            if (credits_[idx] > best_credits) {
                best = vc;
                best_credits = credits_[idx];
            }
        }
        return best;
    }

    void route_head(int r, int p, int vc, InputVc& in) {
        const Flit& head = in.buffer.front();
        Packet& pk = packets_[static_cast<std::size_t>(head.packet)];
        const int deg = degree_[static_cast<std::size_t>(r)];
        const auto grant = [&](int port, int ovc) {
            in.out_port = port;
            in.out_vc = ovc;
            in.waiting_since = -1;
            if (port < deg) owner_[vc_index(r, port, ovc)] = static_cast<int>(vc_index(r, p, vc));
        };

        if (pk.dst_router == r) {
            grant(deg + pk.dst_endpoint % eps_, 0);
            return;
        }
        const int escape_port = escape_port_[cell(r, pk.dst_router)];
        if (pk.escape || vcs_ == 1) {
            if (owner_[vc_index(r, escape_port, 0)] < 0) {
                if (!pk.escape) ++escape_packets_;
                pk.escape = true;
                grant(escape_port, 0);
            }
            return;
        }
        const int port = minimal_port_[cell(r, pk.dst_router)];
        const int ovc = pick_vc(r, port, 1, vcs_ - 1);
        if (ovc >= 0) {
            grant(port, ovc);
            return;
        }
        if (in.waiting_since < 0) in.waiting_since = now_;
        if (now_ - in.waiting_since >= cfg_.escape_after_cycles && owner_[vc_index(r, escape_port, 0)] < 0) {
            pk.escape = true;
            ++escape_packets_;
            grant(escape_port, 0);
        }
    }

    void allocate(int r) {
        const int ports = degree_[static_cast<std::size_t>(r)] + eps_;
        const int start = rr_va_[static_cast<std::size_t>(r)];
        rr_va_[static_cast<std::size_t>(r)] = (start + 1) % ports;
        for (int k = 0; k < ports; ++k) {
            const int p = (start + k) % ports;
            for (int vc = 0; vc < vcs_; ++vc) {
                InputVc& in = inputs_[vc_index(r, p, vc)];
                if (in.out_port >= 0 || in.buffer.empty()) continue;
                const Flit& front = in.buffer.front();
                if (!front.head || front.ready > now_) continue;
                route_head(r, p, vc, in);
            }
        }
    }

    void switch_traverse(int r) {
        const int deg = degree_[static_cast<std::size_t>(r)];
        const int ports = deg + eps_;
        request_vc_.assign(static_cast<std::size_t>(ports), -1);
        winner_.assign(static_cast<std::size_t>(ports), -1);

        // Each input port nominates one ready VC (round-robin) ...
        for (int p = 0; p < ports; ++p) {
            const int gp = gport(r, p);
            for (int k = 0; k < vcs_; ++k) {
                const int vc = (rr_vc_[static_cast<std::size_t>(gp)] + k) % vcs_;
                const InputVc& in = inputs_[vc_index(r, p, vc)];
                if (in.out_port < 0 || in.buffer.empty() || in.buffer.front().ready > now_) continue;
                if (in.out_port < deg && credits_[vc_index(r, in.out_port, in.out_vc)] <= 0) continue;
                request_vc_[static_cast<std::size_t>(p)] = vc;
                break;
            }
        }
        // ... and each output port grants one nominee (round-robin).
        for (int p = 0; p < ports; ++p) {
            const int vc = request_vc_[static_cast<std::size_t>(p)];
            if (vc < 0) continue;
            const int out = inputs_[vc_index(r, p, vc)].out_port;
            const int gout = gport(r, out);
            const int cur = winner_[static_cast<std::size_t>(out)];
            const auto priority = [&](int in_port) {
                return (in_port - rr_out_[static_cast<std::size_t>(gout)] + ports) % ports;
            };
            if (cur < 0 || priority(p) < priority(cur)) winner_[static_cast<std::size_t>(out)] = p;
        }
        for (int out = 0; out < ports; ++out) {
            const int p = winner_[static_cast<std::size_t>(out)];
            if (p < 0) continue;
            const int vc = request_vc_[static_cast<std::size_t>(p)];
            rr_vc_[static_cast<std::size_t>(gport(r, p))] = (vc + 1) % vcs_;
            rr_out_[static_cast<std::size_t>(gport(r, out))] = (p + 1) % ports;
            traverse(r, p, vc);
        }
    }

    void traverse(int r, int p, int vc) {
        const int deg = degree_[static_cast<std::size_t>(r)];
        InputVc& in = inputs_[vc_index(r, p, vc)];
        const Flit flit = in.buffer.pop();
        --buffered_[static_cast<std::size_t>(r)];
        const int out = in.out_port;
        const int ovc = in.out_vc;

        if (p < deg) credit_links_[static_cast<std::size_t>(gport(r, p))].push({now_ + cfg_.link_latency_cycles, vc});

        if (out < deg) {
            --credits_[vc_index(r, out, ovc)];
            links_[static_cast<std::size_t>(gport(r, out))].push({now_ + cfg_.link_latency_cycles, flit, ovc});
            if (flit.tail) owner_[vc_index(r, out, ovc)] = -1;
        } else {
            eject(flit);
        }
        if (flit.tail) {
            in.out_port = -1;
            in.out_vc = -1;
            in.waiting_since = -1;
        }
    }

    void eject(const Flit& flit) {
        ++flits_ejected_;
        const Packet& pk = packets_[static_cast<std::size_t>(flit.packet)];
        if (pk.measured && now_ < measure_end_) ++measured_flits_accepted_;
        if (!flit.tail) return;
        ++packets_ejected_;
        if (pk.measured) {
            latency_sum_ += now_ - pk.created;
            ++measured_ejected_;
        }
        free_packets_.push_back(flit.packet);
    }

    const SimConfig& cfg_;
    int n_;
    int eps_;
    int vcs_;
    int depth_;
    std::mt19937_64 rng_;
    std::int64_t now_ = 0;
    std::int64_t measure_end_ = 0;

    std::vector<int> port_base_;
    std::vector<int> degree_;
    std::vector<int> peer_router_;
    std::vector<int> peer_port_;
    std::vector<int> minimal_port_;
    std::vector<int> escape_port_;

    std::vector<InputVc> inputs_;
    std::vector<int> credits_;
    std::vector<int> owner_;
    std::vector<Ring<LinkFlit>> links_;
    std::vector<Ring<Credit>> credit_links_;
    std::vector<int> rr_vc_;
    std::vector<int> rr_out_;
    std::vector<int> rr_va_;
    std::vector<int> buffered_;
    std::vector<int> request_vc_;
    std::vector<int> winner_;

    std::vector<Endpoint> endpoints_;
    std::vector<Packet> packets_;
    std::vector<int> free_packets_;

    long long packets_created_ = 0;
    long long packets_ejected_ = 0;
    long long flits_created_ = 0;
    long long flits_ejected_ = 0;
    long long measured_flits_created_ = 0;
    long long measured_flits_accepted_ = 0;
    long long measured_ejected_ = 0;
    long long latency_sum_ = 0;
    long long escape_packets_ = 0;
    int max_occupancy_ = 0;
};

void check_simulatable(const Arrangement& arr, const SimConfig& cfg) {
    cfg.validate();
    require(arr.graph.n_vertices() >= 1, "arrangement has no chiplets");
    require(arr.graph.n_vertices() * cfg.endpoints_per_chiplet >= 2, "traffic needs at least two endpoints");
    if (!arr.graph.connected()) fail(ErrorCode::Disconnected, "arrangement graph is not connected");
}

SimResult simulate_with(const Arrangement& arr, const SimConfig& cfg, const RoutingTables& routes,
                        const RunLimits& limits) {
    Network net(arr, cfg, routes);
    return net.run(limits);
}

}  // namespace

SimResult simulate(const Arrangement& arr, const SimConfig& cfg) {
    check_simulatable(arr, cfg);
    const RoutingTables routes = compute_routes(arr.graph);
    return simulate_with(arr, cfg, routes, {});
}

SimResult run(const Arrangement& arr, const SimConfig& cfg) {
    SimResult res = simulate(arr, cfg);
    if (!res.drained) {
        fail(ErrorCode::Saturated, std::to_string(res.packets_created - res.packets_ejected) +
                                       " packets still in flight after " + std::to_string(res.cycles_run) +
                                       " cycles at rate " + std::to_string(cfg.injection_rate));
    }
    return res;
}

double analytic_zero_load(const Arrangement& arr, const SimConfig& cfg) {
    cfg.validate();
    const AdjacencyGraph& g = arr.graph;
    const int n = g.n_vertices();
    const long long total_eps = static_cast<long long>(n) * cfg.endpoints_per_chiplet;
    require(total_eps >= 2, "traffic needs at least two endpoints");
    long long hop_sum = 0;
    for (int v = 0; v < n; ++v) {
        for (int d : g.bfs_distances(v)) {
            if (d < 0) fail(ErrorCode::Disconnected, "arrangement graph is not connected");
            hop_sum += d;
        }
    }
    const double per_pair = static_cast<double>(cfg.endpoints_per_chiplet) * cfg.endpoints_per_chiplet;
    const double mean_hops = per_pair * static_cast<double>(hop_sum) / static_cast<double>(total_eps * (total_eps - 1));
    return mean_hops * (cfg.link_latency_cycles + cfg.router_latency_cycles) + cfg.router_latency_cycles +
           (cfg.packet_len_flits - 1);
}

SaturationResult find_saturation(const Arrangement& arr, const SimConfig& cfg, const SaturationOptions& opts) {
    check_simulatable(arr, cfg);
    require(opts.start_rate > 0.0 && opts.start_rate <= 1.0, "start rate must lie in (0, 1]");
    require(opts.bisection_steps >= 0, "bisection steps must be >= 0");
    const RoutingTables routes = compute_routes(arr.graph);
    const double zero_load = analytic_zero_load(arr, cfg);
    const double latency_limit = opts.latency_factor * zero_load;

    // A run whose drain outlasts many zero-load latencies cannot meet the
    // latency bound on average in practice; cap it to keep probes cheap.
    SimConfig probe_cfg = cfg;
    probe_cfg.drain_cycles = std::min(cfg.drain_cycles, std::max(10'000, static_cast<int>(20.0 * zero_load)));
    const RunLimits limits{latency_limit};

    SaturationResult out;
    const auto probe = [&](double rate) {
        probe_cfg.injection_rate = rate;
        SaturationProbe pr;
        pr.rate = rate;
        pr.result = simulate_with(arr, probe_cfg, routes, limits);
        pr.passed = pr.result.drained && pr.result.avg_packet_latency_cycles <= latency_limit &&
                    pr.result.accepted_rate >= opts.acceptance_floor * pr.result.offered_rate;
        out.probes.push_back(pr);
        return pr.passed;
    };

    double lo = opts.start_rate;
    if (!probe(lo)) {
        out.sat_rate = lo;
        out.sat_fraction = lo;
        return out;
    }
    double hi = -1.0;
    while (lo < 1.0) {
        const double next = std::min(1.0, 2.0 * lo);
        if (probe(next)) {
            lo = next;
        } else {
            hi = next;
            break;
        }
    }
    if (hi > 0.0) {
        for (int step = 0; step < opts.bisection_steps; ++step) {
            const double mid = 0.5 * (lo + hi);
            if (probe(mid)) lo = mid; else hi = mid;
        }
    }
    out.sat_rate = lo;
    out.sat_fraction = lo;
    return out;
}

double throughput_tbps(double sat_fraction, int n, int endpoints_per_chiplet, double link_gbps) {
    require(sat_fraction > 0.0 && n >= 1 && endpoints_per_chiplet >= 1 && link_gbps > 0.0,
            "inputs must be positive");
    return sat_fraction * n * endpoints_per_chiplet * link_gbps / 1000.0;
}

}  // namespace chiplet
