#pragma once

#include <vector>

#include "bilatsim/agent.hpp"

namespace bilatsim {

/// One executed unit trade. The buyer receives bonds and pays cash.
struct TradeRecord {
    int step = 0;
    int buyer_id = 0;
    int seller_id = 0;
    double bonds_moved = 0.0;
    double cash_moved = 0.0;
    double price = 0.0;  // cash per bond

    friend bool operator==(const TradeRecord&, const TradeRecord&) = default;
};

// Transfer amounts are rounded down onto a fixed dyadic grid. Every holding
// then stays an exact multiple of kTradeQuantum, which keeps all resource
// sums exact in double precision.
inline constexpr double kTradeQuantum = 1.0 / (1 << 20);
double quantize_trade_amount(double x);

/// Marginal rate of substitution: the ratio of the cash survival horizon to
/// the bond survival horizon. Above 1 the agent is bond-poor and wants to buy
/// bonds. Throws std::domain_error when either accumulation is not positive.
double compute_mrs(int metabolism_bonds, int metabolism_cash, double bonds, double cash);
double compute_mrs(const AgentState& a);

/// Cobb-Douglas welfare over the two holdings with metabolism-share
/// exponents. Zero iff either holding is zero. Throws std::domain_error
/// on negative holdings.
double compute_welfare(int metabolism_bonds, int metabolism_cash, double bonds, double cash);
double compute_welfare(const AgentState& a);

/// Geometric-mean price of two marginal rates of substitution. Lies strictly
/// between the inputs when they differ. Throws std::domain_error on
/// non-positive input.
double bargain_price(double mrs_a, double mrs_b);

/// True when the agent holds strictly positive amounts of both resources.
inline bool tradeable(const AgentState& a) {
    return a.accum_bonds > 0.0 && a.accum_cash > 0.0;
}

/// Welfare-improving bargaining ladder between two agents. Repeats unit
/// trades while the parties' valuations differ, each transfer strictly
/// improves both welfares, and the MRS ordering is preserved. Per round the
/// higher-MRS agent buys one bond for p cash when p >= 1, or 1/p bonds for
/// one cash when p < 1, with p renegotiated every round. Returns the executed
/// trades; empty when the preconditions fail or no improving trade exists.
std::vector<TradeRecord> execute_trade_session(AgentState& a, AgentState& b, int step);

}  // namespace bilatsim
