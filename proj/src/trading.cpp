#include "bilatsim/trading.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bilatsim {

namespace {
constexpr int kMaxSessionRounds = 1000000;
}

double quantize_trade_amount(double x) {
    return std::floor(x * 1048576.0) / 1048576.0;
}

double compute_mrs(int metabolism_bonds, int metabolism_cash, double bonds, double cash) {
    if (bonds <= 0.0) {
        throw std::domain_error("MRS undefined: bond accumulation is not positive");
    }
    if (cash <= 0.0) {
        throw std::domain_error("MRS undefined: cash accumulation is not positive");
    }
    return (cash / metabolism_cash) / (bonds / metabolism_bonds);
}

double compute_mrs(const AgentState& a) {
    return compute_mrs(a.metabolism_bonds, a.metabolism_cash, a.accum_bonds, a.accum_cash);
}

double compute_welfare(int metabolism_bonds, int metabolism_cash, double bonds, double cash) {
    if (bonds < 0.0 || cash < 0.0) {
        throw std::domain_error("welfare undefined for negative holdings");
    }
    const double total = metabolism_bonds + metabolism_cash;
    return std::pow(bonds, metabolism_bonds / total) * std::pow(cash, metabolism_cash / total);
}

double compute_welfare(const AgentState& a) {
    return compute_welfare(a.metabolism_bonds, a.metabolism_cash, a.accum_bonds, a.accum_cash);
}

double bargain_price(double mrs_a, double mrs_b) {
    if (mrs_a <= 0.0 || mrs_b <= 0.0) {
        throw std::domain_error("bargain_price requires positive MRS values");
    }
    return std::sqrt(mrs_a * mrs_b);
}

std::vector<TradeRecord> execute_trade_session(AgentState& a, AgentState& b, int step) {
    std::vector<TradeRecord> records;
    if (!a.alive || !b.alive || !tradeable(a) || !tradeable(b)) {
        return records;
    }

    for (int round = 0;; ++round) {
        if (round >= kMaxSessionRounds) {
            throw std::logic_error("trade session failed to terminate");
        }
        const double mrs_a = compute_mrs(a);
        const double mrs_b = compute_mrs(b);
        if (mrs_a == mrs_b) {
            break;
        }
        AgentState& buyer = mrs_a > mrs_b ? a : b;
        AgentState& seller = mrs_a > mrs_b ? b : a;

        const double p = bargain_price(mrs_a, mrs_b);
        double bonds_moved;
        double cash_moved;
        if (p >= 1.0) {
            bonds_moved = 1.0;
            cash_moved = quantize_trade_amount(p);
        } else {
            bonds_moved = quantize_trade_amount(1.0 / p);
            cash_moved = 1.0;
        }

        const double buyer_bonds = buyer.accum_bonds + bonds_moved;
        const double buyer_cash = buyer.accum_cash - cash_moved;
        const double seller_bonds = seller.accum_bonds - bonds_moved;
        const double seller_cash = seller.accum_cash + cash_moved;
        if (buyer_cash <= 0.0 || seller_bonds <= 0.0) {
            break;
        }

        const bool buyer_gains =
            compute_welfare(buyer.metabolism_bonds, buyer.metabolism_cash, buyer_bonds, buyer_cash) >
            compute_welfare(buyer);
        const bool seller_gains =
            compute_welfare(seller.metabolism_bonds, seller.metabolism_cash, seller_bonds, seller_cash) >
            compute_welfare(seller);
        if (!buyer_gains || !seller_gains) {
            break;
        }

        const double buyer_mrs_after =
            compute_mrs(buyer.metabolism_bonds, buyer.metabolism_cash, buyer_bonds, buyer_cash);
        const double seller_mrs_after =
            compute_mrs(seller.metabolism_bonds, seller.metabolism_cash, seller_bonds, seller_cash);
        if (buyer_mrs_after < seller_mrs_after) {
            break;
        }

        const double price = cash_moved / bonds_moved;
        if (!(price > std::min(mrs_a, mrs_b) && price < std::max(mrs_a, mrs_b))) {
            break;
        }

        buyer.accum_bonds = buyer_bonds;
        buyer.accum_cash = buyer_cash;
        seller.accum_bonds = seller_bonds;
        seller.accum_cash = seller_cash;
        records.push_back({step, buyer.id, seller.id, bonds_moved, cash_moved, price});
    }
    return records;
}

}  // namespace bilatsim
