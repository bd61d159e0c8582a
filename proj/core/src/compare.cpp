#include "t3/eval/compare.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "t3/error.hpp"

namespace t3::eval {

using nlohmann::json;

namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::vector<double> metric_values(const MetricReport& report, const std::string& metric) {
  std::vector<double> values;
  values.reserve(report.docs.size());
  for (const auto& d : report.docs) {
    if (metric == "ROUGE-1") {
      values.push_back(d.rouge1.f1);
    } else if (metric == "ROUGE-2") {
      values.push_back(d.rouge2.f1);
    } else if (metric == "ROUGE-L") {
      values.push_back(d.rougeL.f1);
    } else if (metric == "BLEU") {
      values.push_back(d.bleu);
    } else if (metric == "Factscore" && d.factscore) {
      values.push_back(*d.factscore);
    }
  }
  return values;
}

}  // namespace

SignificanceTable compare_runs(const MetricReport& wo, const MetricReport& t3, double alpha,
                               bool star_any_metric) {
  std::set<std::string> ids_wo, ids_t3;
  for (const auto& d : wo.docs) ids_wo.insert(d.doc_id);
  for (const auto& d : t3.docs) ids_t3.insert(d.doc_id);
  if (ids_wo != ids_t3) {
    throw PreconditionError("document-set mismatch between runs \"" + wo.run_id + "\" and \"" +
                            t3.run_id + "\"");
  }

  SignificanceTable table;
  table.run_wo = wo.run_id;
  table.run_t3 = t3.run_id;
  table.alpha = alpha;
  table.star_any_metric = star_any_metric;
  table.judge_version = !t3.judge_version.empty() ? t3.judge_version : wo.judge_version;

  std::vector<std::string> metrics = {"ROUGE-1", "ROUGE-2", "ROUGE-L", "BLEU", "Factscore"};
  for (const auto& metric : metrics) {
    std::vector<double> a = metric_values(wo, metric);
    std::vector<double> b = metric_values(t3, metric);
    if (metric == "Factscore" && (a.size() < 2 || b.size() < 2)) continue;

    MetricComparison cmp;
    cmp.metric = metric;
    cmp.ttest = welch_t(a, b, alpha);
    cmp.mean_wo = cmp.ttest.mean_a;
    cmp.mean_t3 = cmp.ttest.mean_b;
    cmp.wo_bold = cmp.mean_wo > cmp.mean_t3;
    cmp.t3_bold = cmp.mean_t3 > cmp.mean_wo;
    table.metrics.push_back(std::move(cmp));
  }

  if (!table.metrics.empty()) {
    bool all_sig = true, any_sig = false, sweep = true;
    for (const auto& cmp : table.metrics) {
      all_sig = all_sig && cmp.ttest.significant;
      any_sig = any_sig || cmp.ttest.significant;
      sweep = sweep && cmp.t3_bold;
    }
    table.starred = star_any_metric ? any_sig : all_sig;
    table.highlighted = sweep;
  }
  return table;
}

std::string render_markdown(const SignificanceTable& table) {
  std::string out;
  out += "# Comparison: w/o vs T3\n\n";
  out += "- w/o run: " + table.run_wo + "\n";
  out += "- T3 run: " + table.run_t3 + "\n";
  out += "- alpha: " + sig6(table.alpha) + "\n";
  out += std::string("- star rule: ") +
         (table.star_any_metric ? "any metric" : "all metrics") + "\n";
  if (!table.judge_version.empty()) out += "- judge: " + table.judge_version + "\n";
  out += "\n| Metric | w/o | T3 | p |\n| --- | --- | --- | --- |\n";
  for (const auto& cmp : table.metrics) {
    std::string wo_cell = fixed4(cmp.mean_wo);
    std::string t3_cell = fixed4(cmp.mean_t3);
    if (cmp.wo_bold) wo_cell = "**" + wo_cell + "**";
    if (cmp.t3_bold) t3_cell = "**" + t3_cell + "**";
    std::string p_cell = sig6(cmp.ttest.p);
    if (cmp.ttest.significant) p_cell += "*";
    out += "| " + cmp.metric + " | " + wo_cell + " | " + t3_cell + " | " + p_cell + " |\n";
  }
  out += "\n";
  out += table.starred ? "Starred: yes — the configured rule holds at this alpha.\n"
                       : "Starred: no.\n";
  if (table.highlighted) out += "**Highlighted: T3 leads on every metric.**\n";
  return out;
}

std::string render_csv(const SignificanceTable& table) {
  std::string out = "metric,wo_mean,t3_mean,t,p,significant,wo_bold,t3_bold\n";
  for (const auto& cmp : table.metrics) {
    out += cmp.metric + "," + sig6(cmp.mean_wo) + "," + sig6(cmp.mean_t3) + "," +
           sig6(cmp.ttest.t) + "," + sig6(cmp.ttest.p) + "," +
           (cmp.ttest.significant ? "true" : "false") + "," +
           (cmp.wo_bold ? "true" : "false") + "," + (cmp.t3_bold ? "true" : "false") + "\n";
  }
  return out;
}

namespace {

json ttest_to_json(const TTestResult& t) {
  return {{"mean_a", t.mean_a}, {"mean_b", t.mean_b}, {"s1", t.s1},       {"s2", t.s2},
          {"n1", t.n1},         {"n2", t.n2},         {"df", t.df},       {"t", t.t},
          {"p", t.p},           {"alpha", t.alpha},   {"significant", t.significant}};
}

TTestResult ttest_from_json(const json& obj) {
  TTestResult t;
  t.mean_a = obj.at("mean_a").get<double>();
  t.mean_b = obj.at("mean_b").get<double>();
  t.s1 = obj.at("s1").get<double>();
  t.s2 = obj.at("s2").get<double>();
  t.n1 = obj.at("n1").get<long>();
  t.n2 = obj.at("n2").get<long>();
  t.df = obj.at("df").get<double>();
  t.t = obj.at("t").get<double>();
  t.p = obj.at("p").get<double>();
  t.alpha = obj.at("alpha").get<double>();
  t.significant = obj.at("significant").get<bool>();
  return t;
}

}  // namespace

std::string render_json(const SignificanceTable& table) {
  json metrics = json::array();
  for (const auto& cmp : table.metrics) {
    metrics.push_back({{"metric", cmp.metric},
                       {"mean_wo", cmp.mean_wo},
                       {"mean_t3", cmp.mean_t3},
                       {"ttest", ttest_to_json(cmp.ttest)},
                       {"wo_bold", cmp.wo_bold},
                       {"t3_bold", cmp.t3_bold}});
  }
  json obj;
  obj["run_wo"] = table.run_wo;
  obj["run_t3"] = table.run_t3;
  obj["alpha"] = table.alpha;
  obj["star_any_metric"] = table.star_any_metric;
  obj["metrics"] = std::move(metrics);
  obj["starred"] = table.starred;
  obj["highlighted"] = table.highlighted;
  obj["judge_version"] = table.judge_version;
  return obj.dump(2);
}

SignificanceTable table_from_json_text(const std::string& text) {
  try {
    json obj = json::parse(text);
    SignificanceTable table;
    table.run_wo = obj.at("run_wo").get<std::string>();
    table.run_t3 = obj.at("run_t3").get<std::string>();
    table.alpha = obj.at("alpha").get<double>();
    table.star_any_metric = obj.at("star_any_metric").get<bool>();
    for (const auto& row : obj.at("metrics")) {
      MetricComparison cmp;
      cmp.metric = row.at("metric").get<std::string>();
      cmp.mean_wo = row.at("mean_wo").get<double>();
      cmp.mean_t3 = row.at("mean_t3").get<double>();
      cmp.ttest = ttest_from_json(row.at("ttest"));
      cmp.wo_bold = row.at("wo_bold").get<bool>();
      cmp.t3_bold = row.at("t3_bold").get<bool>();
      table.metrics.push_back(std::move(cmp));
    }
    table.starred = obj.at("starred").get<bool>();
    table.highlighted = obj.at("highlighted").get<bool>();
    table.judge_version = obj.value("judge_version", std::string());
    return table;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad significance table: ") + e.what());
  }
}

void render_report(const SignificanceTable& table, const std::string& format,
                   const std::string& path) {
  std::string content;
  if (format == "markdown") {
    content = render_markdown(table);
  } else if (format == "csv") {
    content = render_csv(table);
  } else if (format == "json") {
    content = render_json(table);
  } else {
    throw ConfigError("unknown report format \"" + format +
                      "\" (expected markdown, csv or json)");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace t3::eval
