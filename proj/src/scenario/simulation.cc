#include "simrun/scenario/simulation.h"

#include <cstdio>
#include <stdexcept>

#include "simrun/traffic/distribution.h"

namespace simrun::scenario {
namespace {

constexpr net::FlowId kWowFlow = 1;
constexpr net::FlowId kWowServerFlow = 2;
constexpr net::FlowId kFtpFlow = 3;

nlohmann::json DelayJson(const std::optional<metrics::DelayStats>& s) {
  if (!s) return {{"samples", 0}, {"status", "no samples"}};
  return {{"samples", s->count},
          {"mean_s", s->mean_s},
          {"median_s", s->median_s},
          {"p95_s", s->p95_s},
          {"max_s", s->max_s}};
}

nlohmann::json OptionalNumber(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

Simulation::Simulation(const ScenarioConfig& config,
                       const traffic::WowModel& model)
    : config_(config),
      window_(config.EffectiveWindow()),
      uplink_virtual_(window_),
      downlink_virtual_(window_) {
  config_.Validate();
  topo_ = std::make_unique<net::Topology>(kernel_, config_.network);
  using net::Role;
  const auto node = [this](Role r) { return topo_->node(r); };

  if (const FlowConfig* wow = config_.Find(FlowRole::kWow)) {
    AddConnection(kWowConn, "wow", node(Role::kGameClient),
                  node(Role::kGameServer), net::Direction::kUplink, *wow);
    AddConnection(kWowServerConn, "wow", node(Role::kGameServer),
                  node(Role::kGameClient), net::Direction::kDownlink, *wow);
    for (const auto& [name, side] :
         {std::pair{kWowConn, traffic::Side::kClient},
          std::pair{kWowServerConn, traffic::Side::kServer}}) {
      const std::string stream = std::string("wow.") + name;
      generators_.push_back(std::make_unique<traffic::WowGenerator>(
          model, side, traffic::SubstreamSeed(config_.seed, stream)));
      traffic::WowGenerator& gen = *generators_.back();
      ScheduleApdu(conns_.at(name), gen, wow->start + gen.Next().wait);
    }
  }
  if (const FlowConfig* ftp = config_.Find(FlowRole::kFtp)) {
    AddConnection(kFtpConn, "ftp", node(Role::kFtpClient),
                  node(Role::kFtpServer), net::Direction::kUplink, *ftp);
    ftp_ = std::make_unique<traffic::FtpSource>(ftp->start);
    tcp::TcpConnection& c = *conns_.at(kFtpConn).tcp;
    c.set_refill_hook([this](tcp::TcpSender& s, SimTime now) {
      ftp_->Fill(s, now);
    });
    kernel_.Schedule(ftp->start, sim::EventKind::kAppGenerate, kFtpFlow,
                     [&c] { c.Kick(); });
  }

  AttachPortProbes(topo_->uplink(), uplink_trace_, uplink_virtual_);
  AttachPortProbes(topo_->downlink(), downlink_trace_, downlink_virtual_);

  kernel_.Schedule(window_.start, sim::EventKind::kProbe, 0, [this] {
    for (auto& [_, c] : conns_)
      c.acked_at_window_start = c.tcp->sender().snd_una();
  });
}

void Simulation::AddConnection(const std::string& name,
                               const std::string& role, net::NodeId src,
                               net::NodeId dst, net::Direction dir,
                               const FlowConfig& flow) {
  const net::FlowId id = name == kWowConn         ? kWowFlow
                         : name == kWowServerConn ? kWowServerFlow
                                                  : kFtpFlow;
  tcp::SenderConfig sc;
  sc.variant = flow.variant;
  sc.adv_window = flow.adv_window_segments;
  sc.initial_cwnd = config_.tcp.initial_cwnd_segments;
  sc.initial_rto = config_.tcp.initial_rto;
  sc.min_rto = config_.tcp.min_rto;
  sc.dupack_threshold = config_.tcp.dupack_threshold;
  sc.vegas_alpha = config_.tcp.vegas_alpha;
  sc.vegas_beta = config_.tcp.vegas_beta;
  sc.vegas_gamma = config_.tcp.vegas_gamma;

  Conn& conn = conns_[name];
  conn.role = role;
  conn.tcp = std::make_unique<tcp::TcpConnection>(
      name, kernel_, *topo_, tcp::Endpoint{id, src, dst, dir}, sc);
  flow_names_[id] = name;

  metrics::CwndTrace* trace = &conn.cwnd;
  conn.tcp->sender().set_cwnd_probe(
      [trace](SimTime t, double cwnd, double ssthresh) {
        trace->Add(t, cwnd, ssthresh);
      });
  conn.tcp->sender().ReportCwnd(SimTime::Zero());
  if (config_.packet_log) {
    std::vector<metrics::PacketRecord>* log = &packet_logs_[role];
    conn.tcp->set_transmit_probe([log](const net::Packet& p, SimTime now) {
      log->push_back({now, p.wire_bytes, p.direction});
    });
  }
}

void Simulation::ScheduleApdu(Conn& conn, traffic::WowGenerator& gen,
                              SimTime at) {
  const auto target = static_cast<uint32_t>(conn.tcp->endpoint().flow);
  kernel_.Schedule(at, sim::EventKind::kAppGenerate, target,
                   [this, &conn, &gen] {
                     const traffic::Apdu next = gen.Next();
                     conn.tcp->Write(next.bytes);
                     ScheduleApdu(conn, gen, kernel_.Now() + next.wait);
                   });
}

void Simulation::AttachPortProbes(net::Port& port, metrics::QueueTrace& trace,
                                  metrics::VirtualDelayIntegrator& integrator) {
  port.set_tx_start_probe([this](const net::Packet& p, SimTime start) {
    if (p.payload_bytes == 0) return;
    if (Conn* c = FindByFlow(p.flow)) c->delays.Record(p.t_enqueued, start);
  });
  port.set_backlog_probe(
      [&integrator](SimTime now, SimTime busy_until, SimTime queued) {
        integrator.Update(now, busy_until, queued);
      });
  port.queue().set_probe(
      [&trace](SimTime now, uint32_t pkts, uint64_t bytes, uint64_t drops) {
        trace.Add(now, pkts, bytes, drops);
      });
}

Simulation::Conn* Simulation::FindByFlow(net::FlowId flow) {
  auto it = flow_names_.find(flow);
  return it == flow_names_.end() ? nullptr : &conns_.at(it->second);
}

void Simulation::Run() {
  if (ran_) throw std::logic_error("Simulation::Run called twice");
  ran_ = true;
  kernel_.RunUntil(config_.duration);
  uplink_virtual_.Finish(config_.duration);
  downlink_virtual_.Finish(config_.duration);
}

tcp::TcpConnection* Simulation::connection(const std::string& name) {
  auto it = conns_.find(name);
  return it == conns_.end() ? nullptr : it->second.tcp.get();
}

const tcp::TcpConnection* Simulation::connection(
    const std::string& name) const {
  auto it = conns_.find(name);
  return it == conns_.end() ? nullptr : it->second.tcp.get();
}

std::vector<std::string> Simulation::connection_names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : conns_) out.push_back(name);
  return out;
}

const metrics::DelayRecorder* Simulation::delays(
    const std::string& conn) const {
  auto it = conns_.find(conn);
  return it == conns_.end() ? nullptr : &it->second.delays;
}

const metrics::CwndTrace* Simulation::cwnd(const std::string& conn) const {
  auto it = conns_.find(conn);
  return it == conns_.end() ? nullptr : &it->second.cwnd;
}

const metrics::QueueTrace& Simulation::queue_trace(net::Direction d) const {
  return d == net::Direction::kUplink ? uplink_trace_ : downlink_trace_;
}

double Simulation::virtual_delay_mean(net::Direction d) const {
  const auto& v =
      d == net::Direction::kUplink ? uplink_virtual_ : downlink_virtual_;
  return v.MeanSeconds().value_or(0.0);
}

uint64_t Simulation::acked_at_window_start(const std::string& conn) const {
  return conns_.at(conn).acked_at_window_start;
}

uint64_t Simulation::drops(const std::string& conn) const {
  const net::FlowId flow = conns_.at(conn).tcp->endpoint().flow;
  uint64_t total = 0;
  for (const auto& port : topo_->ports())
    total += port->queue().drops_for_flow(flow);
  return total;
}

nlohmann::json Simulation::Summary() const {
  nlohmann::json flows = nlohmann::json::object();
  const double window_s = window_.length().seconds();
  for (const auto& [name, c] : conns_) {
    const tcp::TcpSender& s = c.tcp->sender();
    const tcp::SenderStats& st = s.stats();
    const uint64_t acked = s.snd_una();
    flows[name] = {
        {"role", c.role},
        {"variant", tcp::VariantName(s.variant())},
        {"direction", net::DirectionName(c.tcp->endpoint().direction)},
        {"queuing_delay", DelayJson(metrics::SummarizeDelays(
                              c.delays.samples(), window_))},
        {"drops", drops(name)},
        {"bytes_acked", acked},
        {"goodput_bps",
         (acked - c.acked_at_window_start) * 8.0 / window_s},
        {"mean_cwnd_segments",
         OptionalNumber(metrics::TimeWeightedMeanCwnd(c.cwnd.points(),
                                                      window_))},
        {"segments_sent", st.segments_sent},
        {"retransmissions", st.retransmissions},
        {"fast_recoveries", st.fast_recoveries},
        {"timeouts", st.timeouts},
    };
  }
  nlohmann::json queues = nlohmann::json::object();
  for (net::Direction d : {net::Direction::kUplink, net::Direction::kDownlink}) {
    const net::Port& port = d == net::Direction::kUplink ? topo_->uplink()
                                                         : topo_->downlink();
    const net::QueueCounters& qc = port.queue().counters();
    queues[port.name()] = {
        {"capacity_pkts", port.queue().capacity()},
        {"max_occupancy_pkts", qc.max_occupancy},
        {"enqueued", qc.enqueued},
        {"dequeued", qc.dequeued},
        {"drops", qc.dropped},
        {"virtual_delay_mean_s", virtual_delay_mean(d)},
    };
  }
  const sim::KernelStats ks = kernel_.stats();
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(ks.trace_digest));
  return {
      {"tool_version", SIMRUN_VERSION},
      {"seed", config_.seed},
      {"duration_s", config_.duration.seconds()},
      {"measurement_window",
       {window_.start.seconds(), window_.end.seconds()}},
      {"flows", flows},
      {"queues", queues},
      {"kernel",
       {{"events_processed", ks.processed},
        {"events_scheduled", ks.scheduled},
        {"events_cancelled", ks.cancelled},
        {"trace_digest", digest}}},
      {"config", config_.ToJson()},
  };
}

}  // namespace simrun::scenario
