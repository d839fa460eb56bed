// hanjoint/beam_search.cc

#include "hanjoint/beam_search.h"

#include <algorithm>
#include <queue>

#include "hanjoint/ctc.h"
#include "hanjoint/error.h"
#include "hanjoint/log_math.h"

namespace hanjoint::beam {

namespace {

// Prefixes are nodes of a trie that only grows; node 0 is the empty prefix.
struct TrieNode {
  int parent;
  TokenId token;
};

struct Entry {
  int node;
  double blank;     // log p(prefix, last frame emitted blank)
  double nonblank;  // log p(prefix, last frame emitted the last label)
  double total() const { return LogAdd(blank, nonblank); }
};

// A selection candidate: either a surviving beam entry (token < 0) or the
// extension of beam entry `slot` by `token`.
struct Candidate {
  double score;
  int slot;
  TokenId token;
};

class Search {
 public:
  Search(const EmissionLattice &lattice, const BeamConfig &config)
      : lattice_(lattice), config_(config) {}

  std::vector<Entry> Run();

  TokenSeq Sequence(int node) const {
    TokenSeq out;
    for (; node != 0; node = trie_[node].parent) out.push_back(trie_[node].token);
    std::reverse(out.begin(), out.end());
    return out;
  }

  // Strict weak order: higher score first, then lexicographic tokens.
  bool Better(double score_a, const TokenSeq &a, double score_b,
              const TokenSeq &b) const {
    if (score_a != score_b) return score_a > score_b;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }

 private:
  TokenSeq CandidateSequence(const Candidate &c) const {
    TokenSeq seq = Sequence(beam_[c.slot].node);
    if (c.token >= 0) seq.push_back(c.token);
    return seq;
  }

  bool CandidateBetter(const Candidate &a, const Candidate &b) const {
    if (a.score != b.score) return a.score > b.score;
    return Better(a.score, CandidateSequence(a), b.score, CandidateSequence(b));
  }

  void Step(std::size_t frame);

  const EmissionLattice &lattice_;
  const BeamConfig &config_;
  std::vector<TrieNode> trie_{{-1, -1}};
  std::vector<Entry> beam_{{0, 0.0, kLogZero}};
  std::vector<int> node_slot_{0};
};

void Search::Step(std::size_t frame) {
  const auto emit = lattice_.row(frame);
  const std::size_t V = emit.size();
  const std::size_t B = beam_.size();

  std::vector<char> allowed(V, 1);
  allowed[kBlankId] = 0;
  if (config_.token_cutoff > 0 &&
      static_cast<std::size_t>(config_.token_cutoff) < V - 1) {
    std::vector<TokenId> order;
    for (std::size_t v = 1; v < V; ++v) order.push_back(static_cast<TokenId>(v));
    std::stable_sort(order.begin(), order.end(),
                     [&](TokenId a, TokenId b) { return emit[a] > emit[b]; });
    std::fill(allowed.begin(), allowed.end(), 0);
    for (int i = 0; i < config_.token_cutoff; ++i) allowed[order[i]] = 1;
  }

  // Surviving prefixes: emit blank, or repeat the last label.
  std::vector<Entry> stay(B);
  for (std::size_t i = 0; i < B; ++i) {
    const Entry &e = beam_[i];
    stay[i].node = e.node;
    stay[i].blank = e.total() + emit[kBlankId];
    stay[i].nonblank = e.node != 0 ? e.nonblank + emit[trie_[e.node].token]
                                   : kLogZero;
  }

  // An extension whose result is already in the beam merges into it.
  std::vector<std::vector<TokenId>> merged(B);
  for (std::size_t i = 0; i < B; ++i) {
    int node = beam_[i].node;
    if (node == 0) continue;
    int parent_slot = node_slot_[trie_[node].parent];
    TokenId v = trie_[node].token;
    if (parent_slot < 0 || !allowed[v]) continue;
    const Entry &p = beam_[parent_slot];
    double base = (p.node != 0 && trie_[p.node].token == v) ? p.blank : p.total();
    stay[i].nonblank = LogAdd(stay[i].nonblank, base + emit[v]);
    merged[parent_slot].push_back(v);
  }

  const std::size_t width = static_cast<std::size_t>(config_.beam_width);
  auto worse = [this](const Candidate &a, const Candidate &b) {
    return CandidateBetter(a, b);
  };
  // Top of the heap is the worst kept candidate.
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(worse)> heap(
      worse);
  auto offer = [&](const Candidate &c) {
    if (c.score == kLogZero) return;
    if (heap.size() < width) {
      heap.push(c);
    } else if (c.score > heap.top().score ||
               (c.score == heap.top().score && CandidateBetter(c, heap.top()))) {
      heap.pop();
      heap.push(c);
    }
  };

  for (std::size_t i = 0; i < B; ++i) {
    offer({stay[i].total(), static_cast<int>(i), -1});
  }
  std::vector<int> stamp(V, -1);
  for (std::size_t i = 0; i < B; ++i) {
    for (TokenId v : merged[i]) stamp[v] = static_cast<int>(i);
    const Entry &e = beam_[i];
    const double total = e.total();
    const TokenId last = e.node != 0 ? trie_[e.node].token : -1;
    for (std::size_t v = 1; v < V; ++v) {
      if (!allowed[v] || stamp[v] == static_cast<int>(i)) continue;
      double score = (static_cast<TokenId>(v) == last ? e.blank : total) + emit[v];
      if (heap.size() >= width && score < heap.top().score) continue;
      offer({score, static_cast<int>(i), static_cast<TokenId>(v)});
    }
  }

  std::vector<Entry> next;
  next.reserve(heap.size());
  for (; !heap.empty(); heap.pop()) {
    const Candidate &c = heap.top();
    if (c.token < 0) {
      next.push_back(stay[c.slot]);
    } else {
      trie_.push_back({beam_[c.slot].node, c.token});
      next.push_back({static_cast<int>(trie_.size()) - 1, kLogZero, c.score});
    }
  }

  for (const Entry &e : beam_) node_slot_[e.node] = -1;
  beam_ = std::move(next);
  node_slot_.resize(trie_.size(), -1);
  for (std::size_t i = 0; i < beam_.size(); ++i) {
    node_slot_[beam_[i].node] = static_cast<int>(i);
  }
}

std::vector<Entry> Search::Run() {
  for (std::size_t f = 0; f < lattice_.frames(); ++f) Step(f);
  return beam_;
}

}  // namespace

void BeamConfig::Validate() const {
  if (beam_width < 1 || max_output < 1 || max_output > beam_width ||
      token_cutoff < 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "beam config requires 1 <= max_output <= beam_width and "
                "token_cutoff >= 0");
  }
}

std::vector<Hypothesis> PrefixBeamSearch(const EmissionLattice &lattice,
                                         const Vocabulary &vocab,
                                         const BeamConfig &config,
                                         Level level) {
  config.Validate();
  if (!lattice.normalized()) {
    throw Error(ErrorCode::kNotNormalized,
                "beam search requires a normalized lattice");
  }
  if (lattice.vocab_size() != vocab.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "lattice width " + std::to_string(lattice.vocab_size()) +
                    " != vocabulary size " + std::to_string(vocab.size()));
  }

  Search search(lattice, config);
  std::vector<Entry> beam = search.Run();

  std::vector<Hypothesis> out;
  out.reserve(beam.size());
  // Pruned alignments leave the search mass short of the true posterior;
  // surviving prefixes are ranked by their exact CTC probability instead.
  for (const Entry &e : beam) {
    TokenSeq tokens = search.Sequence(e.node);
    double log_prob = ctc::CtcLogProb(lattice, tokens).log_prob;
    out.push_back({std::move(tokens), log_prob, level});
  }
  std::sort(out.begin(), out.end(), [&](const Hypothesis &a, const Hypothesis &b) {
    return search.Better(a.log_prob, a.tokens, b.log_prob, b.tokens);
  });
  if (out.size() > static_cast<std::size_t>(config.max_output)) {
    out.resize(config.max_output);
  }
  return out;
}

}  // namespace hanjoint::beam
