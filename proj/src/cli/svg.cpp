// SVG figures. Every annotation carries data-source / data-key (a JSON
// pointer) / data-value attributes naming the artifact value it shows; the
// figures never compute statistics of their own beyond bar heights and point
// positions.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cli/artifacts.hpp"
#include "text_util.hpp"
#include "thermorisk/sampling.hpp"
#include "thermorisk/stats.hpp"

namespace thermorisk::cli::detail {

namespace {

using nlohmann::json;
using thermorisk::detail::format_9g;

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;
constexpr const char* kGreen = "#1a9850";
constexpr const char* kBlue = "#2166ac";
constexpr const char* kRed = "#d73027";
constexpr const char* kGray = "#9e9e9e";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

/// A value taken from an artifact, addressed by JSON pointer.
struct Ref {
  std::string source;  // "summary.json" or "ranking.json"
  std::string key;
  double value = 0.0;

  std::string text() const { return format_9g(value); }
  std::string attrs(const std::string& role) const {
    return " class=\"annotation\" data-role=\"" + role + "\" data-source=\"" + source +
           "\" data-key=\"" + key + "\" data-value=\"" + text() + "\"";
  }
};

Ref ref(const json& doc, const std::string& source, const std::string& key) {
  return {source, key, doc.at(json::json_pointer(key)).get<double>()};
}

class Svg {
 public:
  explicit Svg(const std::string& title) {
    os_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    text(kWidth / 2, 24, escape(title), 16, "middle");
  }

  void line(double x1, double y1, double x2, double y2, const char* stroke, double width = 1.0,
            const char* dash = nullptr, const std::string& extra = {}) {
    os_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
        << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << width
        << '"';
    if (dash) os_ << " stroke-dasharray=\"" << dash << '"';
    os_ << extra << "/>\n";
  }

  void rect(double x, double y, double w, double h, const char* fill, const char* stroke,
            const std::string& extra = {}) {
    os_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
        << "\" height=\"" << num(h) << "\" fill=\"" << fill << "\" stroke=\"" << stroke << '"'
        << extra << "/>\n";
  }

  void circle(double cx, double cy, double r, const char* fill, const std::string& extra = {}) {
    os_ << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r)
        << "\" fill=\"" << fill << '"' << extra << "/>\n";
  }

  void text(double x, double y, const std::string& content, int size = 11,
            const char* anchor = "start", const char* fill = "black",
            const std::string& extra = {}) {
    os_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
        << "\" text-anchor=\"" << anchor << "\" fill=\"" << fill << '"' << extra << '>'
        << content << "</text>\n";
  }

  /// Label "<caption> <value>" where the value is its own annotated element.
  void labeled_value(double x, double y, const std::string& caption, const Ref& r,
                     const std::string& role, const char* fill, const char* anchor = "start") {
    os_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"11\" text-anchor=\""
        << anchor << "\" fill=\"" << fill << "\">" << escape(caption) << ' '
        << "<tspan" << r.attrs(role) << '>' << r.text() << "</tspan></text>\n";
  }

  void raw(const std::string& s) { os_ << s; }

  std::string finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

 private:
  std::ostringstream os_;
};

struct LinearScale {
  double d0, d1, r0, r1;
  double operator()(double v) const {
    if (d1 == d0) return (r0 + r1) / 2.0;
    return r0 + (v - d0) / (d1 - d0) * (r1 - r0);
  }
};

std::pair<double, double> padded(double lo, double hi) {
  const double span = hi > lo ? hi - lo : std::max(1.0, std::fabs(lo) * 0.1);
  return {lo - 0.05 * span, hi + 0.05 * span};
}

void x_ticks(Svg& svg, const LinearScale& x, double y, int count) {
  for (int i = 0; i <= count; ++i) {
    const double v = x.d0 + (x.d1 - x.d0) * i / count;
    svg.line(x(v), y, x(v), y + 4, "black");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    svg.text(x(v), y + 16, buf, 10, "middle", "black", " class=\"tick\"");
  }
}

void y_ticks(Svg& svg, const LinearScale& y, double x, int count) {
  for (int i = 0; i <= count; ++i) {
    const double v = y.d0 + (y.d1 - y.d0) * i / count;
    svg.line(x - 4, y(v), x, y(v), "black");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    svg.text(x - 6, y(v) + 3, buf, 10, "end", "black", " class=\"tick\"");
  }
}

std::string histogram_svg(const json& summary, std::size_t index, const std::vector<double>& samples) {
  const auto& opt = summary.at("options").at(index);
  const std::string base = "/options/" + std::to_string(index);
  const auto mean = ref(summary, "summary.json", base + "/summary/mean");
  const auto det = ref(summary, "summary.json", base + "/deterministic_kpi");
  const auto median = ref(summary, "summary.json", base + "/summary/q50");
  const auto ci_lo = ref(summary, "summary.json", base + "/summary/median_ci_lower");
  const auto ci_hi = ref(summary, "summary.json", base + "/summary/median_ci_upper");
  const auto s_min = ref(summary, "summary.json", base + "/summary/min");
  const auto s_max = ref(summary, "summary.json", base + "/summary/max");
  const auto s_std = ref(summary, "summary.json", base + "/summary/std");

  Svg svg("Design option " + std::to_string(opt.at("option_id").get<int>()) + ": " +
          opt.value("name", std::string()) + " (annual thermal load, kWh/m2)");

  const auto [lo, hi] =
      padded(std::min(s_min.value, det.value), std::max(s_max.value, det.value));
  const LinearScale x{lo, hi, 80.0, 900.0};

  // Normal-quantile panel.
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double z_edge = normal_inv_cdf((1.0 - 0.375) / (n + 0.25));
  const LinearScale yq{z_edge * 1.1, -z_edge * 1.1, 250.0, 60.0};
  svg.rect(80, 60, 820, 190, "none", "black");
  svg.text(40, 155, "normal quantile", 11, "middle", "black", " transform=\"rotate(-90 40 155)\"");
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double z = normal_inv_cdf((static_cast<double>(i + 1) - 0.375) / (n + 0.25));
    svg.circle(x(sorted[i]), yq(z), 1.8, "black");
  }
  // Reference line of the fitted normal: load = mean + std * z.
  svg.line(x(mean.value + s_std.value * yq.d1), yq(yq.d1), x(mean.value + s_std.value * yq.d0),
           yq(yq.d0), kRed, 1.0, nullptr, s_std.attrs("normal-reference-std"));
  svg.line(x(median.value), 60, x(median.value), 250, kGreen, 1.5, "6,4", median.attrs("median"));
  svg.line(x(ci_lo.value), 60, x(ci_lo.value), 250, kRed, 1.2, "4,3", ci_lo.attrs("median-ci-lower"));
  svg.line(x(ci_hi.value), 60, x(ci_hi.value), 250, kRed, 1.2, "4,3", ci_hi.attrs("median-ci-upper"));
  svg.labeled_value(90, 76, "median", median, "median-label", kGreen);
  svg.labeled_value(90, 90, "0.95 CI lower", ci_lo, "median-ci-lower-label", kRed);
  svg.labeled_value(90, 104, "0.95 CI upper", ci_hi, "median-ci-upper-label", kRed);

  // Histogram panel.
  const auto h = histogram(samples, 20);
  const double max_freq = *std::max_element(h.relative_frequency.begin(), h.relative_frequency.end());
  const LinearScale yh{0.0, max_freq * 1.15, 480.0, 290.0};
  svg.rect(80, 290, 820, 190, "none", "black");
  svg.text(40, 385, "relative frequency", 11, "middle", "black",
           " transform=\"rotate(-90 40 385)\"");
  for (std::size_t b = 0; b < h.bins; ++b) {
    const double x0 = x(h.edges[b]);
    const double x1 = x(h.edges[b + 1]);
    svg.rect(x0, yh(h.relative_frequency[b]), x1 - x0, yh(0.0) - yh(h.relative_frequency[b]),
             "#d9d9d9", "#737373");
  }
  svg.line(x(mean.value), 290, x(mean.value), 480, kGreen, 2.0, nullptr, mean.attrs("mean"));
  svg.line(x(det.value), 290, x(det.value), 480, kBlue, 2.0, nullptr, det.attrs("deterministic"));
  svg.labeled_value(890, 306, "mean", mean, "mean-label", kGreen, "end");
  svg.labeled_value(890, 320, "deterministic", det, "deterministic-label", kBlue, "end");
  x_ticks(svg, x, 480, 8);
  svg.text(490, 525, "annual thermal load [kWh/m2]", 12, "middle");
  return svg.finish();
}

std::string boxplot_svg(const json& summary) {
  const auto& options = summary.at("options");
  Svg svg("Annual thermal load by design option (kWh/m2)");

  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& o : options) {
    lo = std::min({lo, o.at("summary").at("min").get<double>(), o.at("deterministic_kpi").get<double>()});
    hi = std::max({hi, o.at("summary").at("max").get<double>(), o.at("deterministic_kpi").get<double>()});
  }
  const auto [y0, y1] = padded(lo, hi);
  const LinearScale y{y0, y1, 480.0, 50.0};
  svg.rect(80, 50, 840, 430, "none", "black");
  y_ticks(svg, y, 80, 8);
  svg.text(30, 265, "annual thermal load [kWh/m2]", 11, "middle", "black",
           " transform=\"rotate(-90 30 265)\"");

  const double slot = 840.0 / static_cast<double>(options.size());
  for (std::size_t i = 0; i < options.size(); ++i) {
    const std::string base = "/options/" + std::to_string(i);
    const auto r = [&](const std::string& k) { return ref(summary, "summary.json", base + k); };
    const auto q25 = r("/summary/q25");
    const auto q50 = r("/summary/q50");
    const auto q75 = r("/summary/q75");
    const auto mn = r("/summary/min");
    const auto mx = r("/summary/max");
    const auto mean = r("/summary/mean");
    const auto sd = r("/summary/std");
    const auto det = r("/deterministic_kpi");
    const double cx = 80.0 + slot * (static_cast<double>(i) + 0.5);
    const double half = std::min(60.0, slot * 0.25);

    svg.rect(cx - half, y(q75.value), 2 * half, y(q25.value) - y(q75.value), "none", "black");
    svg.line(cx - half, y(q25.value), cx + half, y(q25.value), "black", 1.0, nullptr, q25.attrs("q25"));
    svg.line(cx - half, y(q75.value), cx + half, y(q75.value), "black", 1.0, nullptr, q75.attrs("q75"));
    svg.line(cx - half, y(q50.value), cx + half, y(q50.value), "black", 2.0, nullptr, q50.attrs("median"));
    svg.line(cx, y(q75.value), cx, y(mx.value), "black");
    svg.line(cx, y(q25.value), cx, y(mn.value), "black");
    svg.line(cx - half / 2, y(mx.value), cx + half / 2, y(mx.value), "black", 1.0, nullptr, mx.attrs("max"));
    svg.line(cx - half / 2, y(mn.value), cx + half / 2, y(mn.value), "black", 1.0, nullptr, mn.attrs("min"));

    // Standard deviation marks at mean -/+ std.
    const double sx = cx + half + 8;
    svg.line(sx, y(mean.value - sd.value), sx, y(mean.value + sd.value), kRed, 2.0, nullptr,
             sd.attrs("std"));
    svg.line(cx - half, y(mean.value), cx + half, y(mean.value), kGreen, 2.0, nullptr, mean.attrs("mean"));
    svg.line(cx - half, y(det.value), cx + half, y(det.value), kBlue, 2.0, nullptr,
             det.attrs("deterministic"));

    svg.labeled_value(cx, 498, "mean", mean, "mean-label", kGreen, "middle");
    svg.labeled_value(cx, 512, "det", det, "deterministic-label", kBlue, "middle");
    svg.labeled_value(cx, 526, "std", sd, "std-label", kRed, "middle");
    svg.text(cx, 44, "Option " + std::to_string(options.at(i).at("option_id").get<int>()), 12,
             "middle");
  }
  return svg.finish();
}

void add_points(std::string& svg_body, const std::vector<double>& samples, double cx, double half,
                const LinearScale& y) {
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double jitter = (static_cast<double>((j * 7919) % 41) - 20.0) / 20.0 * half * 0.8;
    svg_body += "<circle cx=\"" + num(cx + jitter) + "\" cy=\"" + num(y(samples[j])) +
                "\" r=\"1.3\" fill=\"" + std::string(kGray) + "\" fill-opacity=\"0.5\"/>\n";
  }
}

std::string boxplot_with_points(const json& summary, const std::map<int, std::vector<double>>& samples) {
  // Points go underneath the box elements: render them first, then splice
  // the box plot body after them.
  const auto& options = summary.at("options");
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& o : options) {
    lo = std::min({lo, o.at("summary").at("min").get<double>(), o.at("deterministic_kpi").get<double>()});
    hi = std::max({hi, o.at("summary").at("max").get<double>(), o.at("deterministic_kpi").get<double>()});
  }
  const auto [y0, y1] = padded(lo, hi);
  const LinearScale y{y0, y1, 480.0, 50.0};
  const double slot = 840.0 / static_cast<double>(options.size());
  std::string points;
  for (std::size_t i = 0; i < options.size(); ++i) {
    const double cx = 80.0 + slot * (static_cast<double>(i) + 0.5);
    const double half = std::min(60.0, slot * 0.25);
    add_points(points, samples.at(options.at(i).at("option_id").get<int>()), cx, half, y);
  }
  auto doc = boxplot_svg(summary);
  const auto anchor = doc.find("<rect x=\"80.00\" y=\"50.00\"");
  doc.insert(anchor, points);
  return doc;
}

std::string criteria_svg(const json& ranking) {
  const auto& risk = ranking.at("risk_report");
  Svg svg("Decision criteria: minimum (maximax), mean (expected value), maximum (maximin)");

  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& r : risk) {
    lo = std::min(lo, r.at("min").get<double>());
    hi = std::max(hi, r.at("max").get<double>());
  }
  const auto [y0, y1] = padded(lo, hi);
  const LinearScale y{y0, y1, 400.0, 50.0};
  svg.rect(80, 50, 600, 350, "none", "black");
  y_ticks(svg, y, 80, 7);
  svg.text(30, 225, "annual thermal load [kWh/m2]", 11, "middle", "black",
           " transform=\"rotate(-90 30 225)\"");

  const double slot = 600.0 / static_cast<double>(risk.size());
  for (std::size_t i = 0; i < risk.size(); ++i) {
    const std::string base = "/risk_report/" + std::to_string(i);
    const auto mn = ref(ranking, "ranking.json", base + "/min");
    const auto mean = ref(ranking, "ranking.json", base + "/kri_mean");
    const auto mx = ref(ranking, "ranking.json", base + "/max");
    const double cx = 80.0 + slot * (static_cast<double>(i) + 0.5);
    svg.line(cx, y(mn.value), cx, y(mx.value), "black");
    svg.circle(cx, y(mn.value), 5, kBlue, mn.attrs("min"));
    svg.circle(cx, y(mean.value), 5, kGreen, mean.attrs("mean"));
    svg.circle(cx, y(mx.value), 5, kRed, mx.attrs("max"));
    svg.labeled_value(cx + 8, y(mn.value) + 4, "min", mn, "min-label", kBlue);
    svg.labeled_value(cx + 8, y(mean.value) + 4, "mean", mean, "mean-label", kGreen);
    svg.labeled_value(cx + 8, y(mx.value) + 4, "max", mx, "max-label", kRed);
    svg.text(cx, 418, "Option " + std::to_string(risk.at(i).at("option_id").get<int>()), 12,
             "middle");
  }

  // Orderings, best first.
  const auto& rankings = ranking.at("rankings");
  svg.text(700, 70, "Ranking (best first)", 13);
  for (std::size_t k = 0; k < rankings.size(); ++k) {
    const auto& r = rankings.at(k);
    const double ty = 95.0 + 22.0 * static_cast<double>(k);
    std::string line = "<text x=\"700.00\" y=\"" + num(ty) + "\" font-size=\"12\">" +
                       escape(r.at("criterion").get<std::string>()) + ":";
    for (std::size_t j = 0; j < r.at("order").size(); ++j) {
      const auto id_ref =
          ref(ranking, "ranking.json", "/rankings/" + std::to_string(k) + "/order/" + std::to_string(j));
      line += std::string(j ? " &gt;" : "") + " <tspan" + id_ref.attrs("rank") + '>' +
              id_ref.text() + "</tspan>";
    }
    line += "</text>\n";
    svg.raw(line);
  }
  return svg.finish();
}

}  // namespace

std::vector<std::pair<std::string, std::string>> render_plots(const RunArtifacts& a) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto& options = a.summary.at("options");
  for (std::size_t i = 0; i < options.size(); ++i) {
    const int id = options.at(i).at("option_id").get<int>();
    out.emplace_back("histogram_option_" + std::to_string(id) + ".svg",
                     histogram_svg(a.summary, i, a.samples.at(id)));
  }
  out.emplace_back("boxplot.svg", boxplot_with_points(a.summary, a.samples));
  out.emplace_back("criteria.svg", criteria_svg(a.ranking));
  return out;
}

}  // namespace thermorisk::cli::detail
