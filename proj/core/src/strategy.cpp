#include "treesearch/strategy.hpp"

#include <algorithm>
#include <sstream>

namespace treesearch {

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  std::string out = (pos == std::string::npos) ? line : line.substr(0, pos);
  while (!out.empty() && (out.back() == '\r' || out.back() == ' ' || out.back() == '\t'))
    out.pop_back();
  return out;
}

}  // namespace

void QuerySequenceAssignment::validate(int n) const {
  if (size() != n) throw std::runtime_error("sequence assignment size mismatch");
  for (VertexId v = 0; v < n; ++v) {
    for (size_t i = 0; i < seq[v].size(); ++i) {
      VertexId u = seq[v][i];
      if (u < 0 || u >= n)
        throw std::runtime_error("sequence of vertex " + std::to_string(v) +
                                 " lists unknown vertex " + std::to_string(u));
      if (u == v && i + 1 != seq[v].size())
        throw std::runtime_error("vertex " + std::to_string(v) +
                                 " appears in its own sequence before the last position");
    }
  }
}

QuerySequenceAssignment parse_strategy(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  long long n = -1;
  QuerySequenceAssignment s;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_comment(raw);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (n < 0) {
      if (head != "strategy")
        throw ParseError("line " + std::to_string(line_no) + ": expected 'strategy <n>'");
      if (!(ls >> n) || n < 1)
        throw ParseError("line " + std::to_string(line_no) + ": bad vertex count");
      s.seq.assign(n, {});
      continue;
    }
    if (head != "seq")
      throw ParseError("line " + std::to_string(line_no) + ": expected 'seq <id> ...'");
    long long id;
    if (!(ls >> id) || id < 0 || id >= n)
      throw ParseError("line " + std::to_string(line_no) + ": bad vertex id");
    long long u;
    while (ls >> u) {
      if (u < 0 || u >= n)
        throw ParseError("line " + std::to_string(line_no) + ": sequence entry out of range");
      s.seq[id].push_back(static_cast<VertexId>(u));
    }
  }
  if (n < 0) throw ParseError("missing 'strategy' header");
  s.validate(static_cast<int>(n));
  return s;
}

std::string serialize_strategy(const QuerySequenceAssignment& s) {
  std::ostringstream out;
  out << "strategy " << s.size() << "\n";
  for (VertexId v = 0; v < s.size(); ++v) {
    out << "seq " << v;
    for (VertexId u : s.seq[v]) out << " " << u;
    out << "\n";
  }
  return out.str();
}

Rat ScheduleAssignment::vertex_duration(const WeightedTree& t, VertexId v) const {
  Rat d = 0;
  for (const Job& j : jobs[v]) d = std::max(d, j.start + t.weight[j.vertex]);
  return d;
}

Rat ScheduleAssignment::duration(const WeightedTree& t) const {
  Rat d = 0;
  for (VertexId v = 0; v < size(); ++v) d = std::max(d, vertex_duration(t, v));
  return d;
}

QuerySequenceAssignment ScheduleAssignment::induced_sequences() const {
  QuerySequenceAssignment s = QuerySequenceAssignment::empty(size());
  for (VertexId v = 0; v < size(); ++v) {
    std::vector<Job> sorted = jobs[v];
    std::stable_sort(sorted.begin(), sorted.end(), [](const Job& a, const Job& b) {
      if (a.start != b.start) return a.start < b.start;
      return a.vertex < b.vertex;
    });
    for (const Job& j : sorted) s.seq[v].push_back(j.vertex);
  }
  return s;
}

ScheduleAssignment parse_schedule(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  long long n = -1;
  ScheduleAssignment s;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = strip_comment(raw);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (n < 0) {
      if (head != "schedule")
        throw ParseError("line " + std::to_string(line_no) + ": expected 'schedule <n>'");
      if (!(ls >> n) || n < 1)
        throw ParseError("line " + std::to_string(line_no) + ": bad vertex count");
      s.jobs.assign(n, {});
      continue;
    }
    if (head != "job")
      throw ParseError("line " + std::to_string(line_no) + ": expected 'job <owner> <vertex> <start>'");
    long long owner, vertex;
    std::string start;
    if (!(ls >> owner >> vertex >> start) || owner < 0 || owner >= n || vertex < 0 || vertex >= n)
      throw ParseError("line " + std::to_string(line_no) + ": bad job line");
    Rat st;
    try {
      st = parse_rational(start);
    } catch (const std::exception& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (st < 0) throw ParseError("line " + std::to_string(line_no) + ": negative start time");
    s.jobs[owner].push_back(Job{static_cast<VertexId>(vertex), st});
  }
  if (n < 0) throw ParseError("missing 'schedule' header");
  return s;
}

std::string serialize_schedule(const ScheduleAssignment& s) {
  std::ostringstream out;
  out << "schedule " << s.size() << "\n";
  for (VertexId v = 0; v < s.size(); ++v)
    for (const Job& j : s.jobs[v])
      out << "job " << v << " " << j.vertex << " " << rat_str(j.start) << "\n";
  return out.str();
}

std::optional<ScheduleViolation> validate_schedule(const WeightedTree& t,
                                                   const ScheduleAssignment& s) {
  if (s.size() != t.size()) {
    return ScheduleViolation{"size", kNoVertex, kNoVertex, kNoVertex,
                             "schedule size does not match the tree"};
  }
  // Condition: no two jobs in one vertex's schedule overlap in their interior.
  for (VertexId v = 0; v < t.size(); ++v) {
    std::vector<Job> sorted = s.jobs[v];
    std::sort(sorted.begin(), sorted.end(), [](const Job& a, const Job& b) {
      return a.start < b.start;
    });
    Rat max_end = 0;
    VertexId max_end_vertex = kNoVertex;
    for (const Job& j : sorted) {
      if (t.weight[j.vertex] > 0 && max_end_vertex != kNoVertex && j.start < max_end) {
        return ScheduleViolation{"overlap", v, max_end_vertex, j.vertex,
                                 "jobs overlap in the schedule of vertex " + std::to_string(v)};
      }
      Rat end = j.start + t.weight[j.vertex];
      if (max_end_vertex == kNoVertex || end > max_end) {
        max_end = end;
        max_end_vertex = j.vertex;
      }
    }
  }
  // Own-job start per vertex (if present in its own schedule).
  std::vector<std::optional<Rat>> own(t.size());
  for (VertexId v = 0; v < t.size(); ++v)
    for (const Job& j : s.jobs[v])
      if (j.vertex == v) own[v] = j.start;

  // Condition: a child's job is either in the parent's schedule or starts
  // after the parent's own query completes.
  for (VertexId child = 0; child < t.size(); ++child) {
    VertexId par = t.parent[child];
    if (par == kNoVertex) continue;
    for (const Job& j : s.jobs[child]) {
      bool in_parent = false;
      for (const Job& pj : s.jobs[par])
        if (pj.vertex == j.vertex && pj.start == j.start) {
          in_parent = true;
          break;
        }
      if (in_parent) continue;
      if (!own[par].has_value() || *own[par] + t.weight[par] > j.start) {
        return ScheduleViolation{"parent-separation", par, j.vertex, child,
                                 "job for vertex " + std::to_string(j.vertex) +
                                     " in the schedule of " + std::to_string(child) +
                                     " is neither in the parent's schedule nor after the "
                                     "parent's own query"};
      }
    }
  }
  // Edge cover: an unqueried vertex must have all children queried.
  for (VertexId v = 0; v < t.size(); ++v) {
    if (own[v].has_value()) continue;
    for (VertexId c : t.children[v]) {
      if (!own[c].has_value()) {
        return ScheduleViolation{"edge-cover", v, v, c,
                                 "neither endpoint of edge (" + std::to_string(v) + "," +
                                     std::to_string(c) + ") is ever queried"};
      }
    }
  }
  return std::nullopt;
}

const char* reply_str(Reply r) {
  switch (r) {
    case Reply::Found: return "found";
    case Reply::Up: return "up";
    case Reply::Down: return "down";
  }
  return "?";
}

int QueryTrace::light_down_count(const WeightedTree& t, const Rat& omega, int c) const {
  Rat threshold = Rat(c) * omega;
  int count = 0;
  for (const TraceStep& s : steps)
    if (s.reply == Reply::Down && t.weight[s.query] < threshold) ++count;
  return count;
}

std::string format_trace(const QueryTrace& trace, const WeightedTree& t, const Rat& omega,
                         int c) {
  std::ostringstream out;
  for (const TraceStep& s : trace.steps)
    out << "query " << s.query << " reply=" << reply_str(s.reply) << " cum=" << rat_str(s.cumulative)
        << "\n";
  int d = (omega > 0) ? trace.light_down_count(t, omega, c) : 0;
  out << "target " << trace.target << " cost " << rat_str(trace.cost) << " lightdown " << d
      << "\n";
  return out.str();
}

IncompleteAssignmentError::IncompleteAssignmentError(VertexId v, std::vector<VertexId> members)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "incomplete assignment: sequence of vertex " << v
            << " exhausted while the view still has " << members.size() << " vertices {";
        for (size_t i = 0; i < members.size(); ++i) {
          if (i) msg << ",";
          msg << members[i];
        }
        msg << "}";
        return msg.str();
      }()),
      vertex(v),
      view(std::move(members)) {}

}  // namespace treesearch
