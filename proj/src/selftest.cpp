#include <fism/experiment.hpp>
#include <fism/random.hpp>

#include <cmath>
#include <sstream>

namespace fism {

namespace {

struct Case {
    std::string name;
    OraclePtr oracle;
    /// Points closer than this to a kink are skipped by the gradient check.
    std::function<bool(std::span<const double>)> smooth;
};

Vector draw(std::size_t n, double half, CounterRng &rng) {
    Vector x(n);
    for (double &v : x)
        v = rng.uniform(-half, half);
    return x;
}

void gradient_check(const Case &c, std::size_t points, CounterRng &rng, SelfTestReport &report) {
    constexpr double h = 1e-6;
    const std::size_t n = c.oracle->dimension();
    std::size_t done = 0;
    while (done < points) {
        Vector x = draw(n, 5.0, rng);
        if (!c.smooth(x))
            continue;
        ++done;
        auto ev = c.oracle->eval(x);
        for (std::size_t d = 0; d < n; ++d) {
            Vector xp = x, xm = x;
            xp[d] += h;
            xm[d] -= h;
            const double fd = (c.oracle->value(xp) - c.oracle->value(xm)) / (2 * h);
            ++report.checks;
            if (std::abs(fd - ev.subgrad[d]) > 1e-5 * std::max(1.0, std::abs(ev.subgrad[d]))) {
                std::ostringstream msg;
                msg << c.name << ": finite difference " << fd << " vs subgradient "
                    << ev.subgrad[d] << " at coordinate " << d;
                report.failures.push_back(msg.str());
            }
        }
    }
}

void subgradient_inequality(const Case &c, std::size_t pairs, CounterRng &rng,
                            SelfTestReport &report) {
    const std::size_t n = c.oracle->dimension();
    for (std::size_t p = 0; p < pairs; ++p) {
        Vector x = draw(n, 10.0, rng), y = draw(n, 10.0, rng);
        auto ev = c.oracle->eval(x);
        double lin = ev.value;
        for (std::size_t d = 0; d < n; ++d)
            lin += ev.subgrad[d] * (y[d] - x[d]);
        ++report.checks;
        if (c.oracle->value(y) < lin - 1e-9)
            report.failures.push_back(c.name + ": subgradient inequality violated");
    }
}

void projection_checks(std::size_t pairs, CounterRng &rng, SelfTestReport &report) {
    const auto box = BoxConstraint::cube(6, -1.0, 2.0);
    for (std::size_t p = 0; p < pairs; ++p) {
        Vector x = draw(6, 5.0, rng), y = draw(6, 5.0, rng);
        Vector px = project_box(x, box), py = project_box(y, box);
        report.checks += 3;
        if (project_box(px, box) != px)
            report.failures.push_back("projection: not idempotent");
        if (!box.contains(px))
            report.failures.push_back("projection: result outside the box");
        double dp = 0, dx = 0;
        for (std::size_t d = 0; d < 6; ++d) {
            dp += (px[d] - py[d]) * (px[d] - py[d]);
            dx += (x[d] - y[d]) * (x[d] - y[d]);
        }
        if (std::sqrt(dp) > std::sqrt(dx) + 1e-12)
            report.failures.push_back("projection: expansive on a pair");
    }
}

} // namespace

SelfTestReport run_selftest(std::uint64_t seed) {
    CounterRng rng(seed);
    const std::size_t n = 5;
    Vector a = draw(n, 1.0, rng);
    Vector center = draw(n, 2.0, rng);
    const double radius = 1.5;
    Vector anchor = draw(n, 3.0, rng);

    auto ball_smooth = [center, radius](std::span<const double> x) {
        double sq = 0;
        for (std::size_t d = 0; d < x.size(); ++d)
            sq += (x[d] - center[d]) * (x[d] - center[d]);
        const double r = std::sqrt(sq);
        return std::abs(r - radius) > 1e-3 && r > 1e-3;
    };
    auto always = [](std::span<const double>) { return true; };
    auto away_from_axes = [](std::span<const double> x) {
        for (double v : x)
            if (std::abs(v) < 1e-3)
                return false;
        return true;
    };

    std::vector<Case> cases = {
        {"logistic(+1)", std::make_shared<LogisticLoss>(a, 1), always},
        {"logistic(-1)", std::make_shared<LogisticLoss>(a, -1), always},
        {"ball-distance", std::make_shared<BallDistance>(center, radius), ball_smooth},
        {"l1-quad", std::make_shared<L1QuadOuter>(n), away_from_axes},
        {"quad-anchor", std::make_shared<QuadAnchorOuter>(anchor), always},
    };

    SelfTestReport report;
    for (const auto &c : cases) {
        gradient_check(c, 500, rng, report);
        subgradient_inequality(c, 100, rng, report);
    }
    projection_checks(100, rng, report);
    return report;
}

} // namespace fism
