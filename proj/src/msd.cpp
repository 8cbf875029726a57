#include "scma/msd.hpp"

#include <algorithm>
#include <queue>

namespace scma {

namespace {

// Stable insertion sort; child lists hold at most M entries.
void sort_children(std::vector<TreeChild>& v)
{
    for (std::size_t i = 1; i < v.size(); ++i) {
        const TreeChild x = v[i];
        std::size_t j = i;
        for (; j > 0 && x.increment < v[j - 1].increment; --j)
            v[j] = v[j - 1];
        v[j] = x;
    }
}

} // namespace

SearchState SearchState::root(const DetectionLayout& layout)
{
    SearchState s;
    s.codewords.assign(layout.users(), unassigned);
    s.symbols.assign(layout.columns(), Complex(0.0, 0.0));
    return s;
}

ModifiedSphereDecoder::ModifiedSphereDecoder(const AugmentedSystem& sys, const DetectionLayout& layout)
    : sys_(sys), layout_(layout)
{
    const auto& g = sys.g_tilde;
    const std::size_t n = layout.columns();
    if (g.rows() != n || g.cols() != n || sys.y_tilde.size() != n)
        throw Error("augmented system does not match the detection layout");
    if (sys.resources != layout.resources())
        throw Error("augmented system resource count does not match the layout");
    support_.resize(n);
    coeff_.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (g(r, c) == Complex(0.0, 0.0))
                continue;
            if (c < r)
                throw Error("augmented channel is not upper triangular");
            support_[r].push_back(c);
            coeff_[r].push_back(g(r, c));
        }
        if (g(r, r) == Complex(0.0, 0.0))
            throw Error("degenerate channel; resample");
    }
}

double ModifiedSphereDecoder::increment(std::size_t row, const CVector& symbols, OpCounters* counters) const
{
    Complex s = sys_.y_tilde[row];
    const auto& cols = support_[row];
    const auto& coeff = coeff_[row];
    for (std::size_t i = 0; i < cols.size(); ++i)
        s -= coeff[i] * symbols[cols[i]];
    if (counters) {
        if (row < sys_.resources) {
            // d_f complex products (4 mults, 2 adds), d_f complex subtractions
            // (2 adds), |.|^2 (2 mults, 1 add) and the running sum (1 add).
            const std::uint64_t ops = 4 * support_[row].size() + 2;
            counters->real_adds += ops;
            counters->real_mults += ops;
            ++counters->visited_head;
        } else {
            // Identity row with zero observation: |x|^2 and the running sum.
            counters->real_adds += 2;
            counters->real_mults += 2;
            ++counters->visited_tail;
        }
    }
    return std::norm(s);
}

std::vector<TreeChild> ModifiedSphereDecoder::expand_layer(const SearchState& state, std::size_t column,
                                                           OpCounters* counters) const
{
    const std::size_t user = layout_.column_user(column);
    std::vector<TreeChild> out;
    if (!layout_.is_branch_column(column)) {
        const std::size_t cw = state.codewords[user];
        if (cw == SearchState::unassigned)
            throw Error("replication column visited before its user's branching column");
        out.push_back({cw, increment(column, state.symbols, counters)});
        return out;
    }
    CVector symbols = state.symbols;
    for (std::size_t cw = 0; cw < layout_.points(); ++cw) {
        for (auto c : layout_.user_columns(user))
            symbols[c] = layout_.symbol(c, cw);
        out.push_back({cw, increment(column, symbols, counters)});
    }
    sort_children(out);
    return out;
}

double head_residual(const AugmentedSystem& sys, const CVector& x)
{
    const auto& g = sys.g_tilde;
    double acc = 0.0;
    for (std::size_t r = 0; r < sys.resources; ++r) {
        Complex s = sys.y_tilde[r];
        for (std::size_t c = 0; c < g.cols(); ++c)
            s -= g(r, c) * x[c];
        acc += std::norm(s);
    }
    return acc;
}

// Shared depth-first walk. Leaves are handed to the mode-specific sink, which
// also reports the current radius.
class TreeWalker {
public:
    TreeWalker(const ModifiedSphereDecoder& dec, const MsdOptions& options)
        : dec_(dec), layout_(dec.layout_), options_(options), state_(SearchState::root(dec.layout_)),
          buffers_(layout_.columns())
    {}

    template <typename Sink>
    void run(Sink& sink)
    {
        descend(layout_.columns(), 0.0, 0.0, sink);
    }

    OpCounters counters;

private:
    template <typename Sink>
    void descend(std::size_t depth, double partial, double head, Sink& sink)
    {
        if (depth == 0) {
            sink.leaf(state_.codewords, partial, head);
            return;
        }
        const std::size_t column = depth - 1;
        const std::size_t user = layout_.column_user(column);
        const bool branch = layout_.is_branch_column(column);
        const bool is_head = column < dec_.sys_.resources;

        auto& children = buffers_[column];
        children.clear();
        if (branch) {
            // Row `column` only reaches columns >= column, so the user's
            // lower replication columns do not affect these increments.
            for (std::size_t cw = 0; cw < layout_.points(); ++cw) {
                state_.symbols[column] = layout_.symbol(column, cw);
                children.push_back({cw, dec_.increment(column, state_.symbols, &counters)});
            }
            sort_children(children);
        } else {
            children.push_back({state_.codewords[user], dec_.increment(column, state_.symbols, &counters)});
        }

        for (std::size_t i = 0; i < children.size(); ++i) {
            const TreeChild child = children[i];
            const double p = partial + child.increment;
            const double radius = sink.radius();
            if (p > radius) {
                if (options_.on_prune) {
                    // Children are sorted, so every remaining sibling is pruned too.
                    for (std::size_t j = i; j < children.size(); ++j) {
                        PruneEvent ev;
                        ev.column = column;
                        ev.codewords = state_.codewords;
                        ev.codewords[user] = children[j].codeword;
                        ev.partial = partial + children[j].increment;
                        ev.radius = radius;
                        options_.on_prune(ev);
                    }
                }
                break;
            }
            if (branch) {
                state_.codewords[user] = child.codeword;
                for (auto c : layout_.user_columns(user))
                    state_.symbols[c] = layout_.symbol(c, child.codeword);
            }
            descend(depth - 1, p, is_head ? head + child.increment : head, sink);
        }
        if (branch)
            state_.codewords[user] = SearchState::unassigned;
    }

    const ModifiedSphereDecoder& dec_;
    const DetectionLayout& layout_;
    const MsdOptions& options_;
    SearchState state_;
    std::vector<std::vector<TreeChild>> buffers_;
};

namespace {

struct BestLeaf {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> codewords;

    double radius() const { return best; }
    void leaf(const std::vector<std::size_t>& cw, double metric, double)
    {
        if (metric < best || (metric == best && cw < codewords)) {
            best = metric;
            codewords = cw;
        }
    }
};

struct EntryOrder {
    bool operator()(const ListEntry& a, const ListEntry& b) const
    {
        if (a.metric != b.metric)
            return a.metric < b.metric;
        return a.codewords < b.codewords;
    }
};

struct LeafList {
    std::size_t capacity;
    std::priority_queue<ListEntry, std::vector<ListEntry>, EntryOrder> heap; // worst on top

    double radius() const
    {
        return heap.size() < capacity ? std::numeric_limits<double>::infinity() : heap.top().metric;
    }
    void leaf(const std::vector<std::size_t>& cw, double metric, double head)
    {
        ListEntry e{cw, metric, head};
        if (heap.size() < capacity) {
            heap.push(std::move(e));
        } else if (EntryOrder{}(e, heap.top())) {
            heap.pop();
            heap.push(std::move(e));
        }
    }
};

DetectionResult make_result(const AugmentedSystem& sys, const DetectionLayout& layout,
                            const std::vector<std::size_t>& codewords, const OpCounters& counters)
{
    DetectionResult r;
    r.codewords = codewords;
    r.symbols = layout.layer_vector(codewords);
    r.bits = codeword_bits(codewords, layout.bits_per_symbol());
    r.metric = head_residual(sys, layout.search_vector(codewords));
    r.counters = counters;
    return r;
}

} // namespace

DetectionResult msd_detect(const AugmentedSystem& sys, const DetectionLayout& layout, const MsdOptions& options)
{
    ModifiedSphereDecoder dec(sys, layout);
    TreeWalker walker(dec, options);
    BestLeaf sink;
    walker.run(sink);
    if (sink.codewords.empty())
        throw Error("sphere search found no leaf");
    return make_result(sys, layout, sink.codewords, walker.counters);
}

ListMsdResult list_msd(const AugmentedSystem& sys, const DetectionLayout& layout, double noise_variance,
                       std::size_t list_size, double clamp, const MsdOptions& options)
{
    if (list_size == 0)
        throw Error("list size N_cand must be at least 1");
    ModifiedSphereDecoder dec(sys, layout);
    TreeWalker walker(dec, options);
    LeafList sink{list_size, {}};
    walker.run(sink);

    ListMsdResult out;
    out.list.reserve(sink.heap.size());
    while (!sink.heap.empty()) {
        out.list.push_back(sink.heap.top());
        sink.heap.pop();
    }
    std::reverse(out.list.begin(), out.list.end());

    LlrAccumulator acc(layout.users(), layout.bits_per_symbol(), noise_variance, clamp);
    for (const auto& e : out.list)
        acc.add(e.codewords, e.head_metric);
    out.llr = acc.finish();
    out.counters = walker.counters;
    out.best = make_result(sys, layout, out.list.front().codewords, walker.counters);
    return out;
}

} // namespace scma
