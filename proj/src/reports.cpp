// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#include "stepdedup/reports.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "stepdedup/version.hpp"

namespace stepdedup {

ordered_json report_meta(const RunConfig& config, const std::string& provider_name,
                         int provider_dim) {
    ordered_json meta;
    meta["tool"] = kToolName;
    meta["version"] = kToolVersion;
    meta["config_hash"] = config_hash(config);
    meta["provider"] = provider_name;
    meta["provider_dim"] = provider_dim;
    meta["seed"] = config.seed;
    return meta;
}

std::string csv_escape(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::span<const char* const> steps_table_columns() {
    static constexpr std::array<const char*, 10> kColumns = {
        "repo",       "path", "line",          "keyword",    "text",
        "normalized_text", "hash", "is_background", "is_outline", "license"};
    return kColumns;
}

std::string steps_table_csv(const std::vector<StepOccurrence>& occurrences) {
    std::ostringstream out;
    const auto columns = steps_table_columns();
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& occ : occurrences) {
        out << csv_escape(occ.repo_id) << ',' << csv_escape(occ.path) << ',' << occ.line_no << ','
            << to_string(occ.keyword) << ',' << csv_escape(occ.raw_text) << ','
            << csv_escape(occ.normalized_text) << ',' << occ.identity_digest << ','
            << (occ.is_background ? 1 : 0) << ',' << (occ.is_outline ? 1 : 0) << ','
            << to_string(occ.license_class) << '\n';
    }
    return out.str();
}

ordered_json steps_table_columnar(const std::vector<StepOccurrence>& occurrences) {
    // Build the arrays first: inserting keys into an ordered_json
    // object invalidates references to earlier values.
    ordered_json repo = ordered_json::array(), path = ordered_json::array(),
                 line = ordered_json::array(), keyword = ordered_json::array(),
                 text = ordered_json::array(), normalized = ordered_json::array(),
                 hash = ordered_json::array(), background = ordered_json::array(),
                 outline = ordered_json::array(), license = ordered_json::array();
    for (const auto& occ : occurrences) {
        repo.push_back(occ.repo_id);
        path.push_back(occ.path);
        line.push_back(occ.line_no);
        keyword.push_back(to_string(occ.keyword));
        text.push_back(occ.raw_text);
        normalized.push_back(occ.normalized_text);
        hash.push_back(occ.identity_digest);
        background.push_back(occ.is_background);
        outline.push_back(occ.is_outline);
        license.push_back(to_string(occ.license_class));
    }
    ordered_json columns;
    columns["repo"] = std::move(repo);
    columns["path"] = std::move(path);
    columns["line"] = std::move(line);
    columns["keyword"] = std::move(keyword);
    columns["text"] = std::move(text);
    columns["normalized_text"] = std::move(normalized);
    columns["hash"] = std::move(hash);
    columns["is_background"] = std::move(background);
    columns["is_outline"] = std::move(outline);
    columns["license"] = std::move(license);
    return columns;
}

ordered_json steps_table_rows(const std::vector<StepOccurrence>& occurrences) {
    ordered_json rows = ordered_json::array();
    for (const auto& occ : occurrences) {
        ordered_json row;
        row["repo"] = occ.repo_id;
        row["path"] = occ.path;
        row["line"] = occ.line_no;
        row["keyword"] = to_string(occ.keyword);
        row["text"] = occ.raw_text;
        row["normalized_text"] = occ.normalized_text;
        row["hash"] = occ.identity_digest;
        row["is_background"] = occ.is_background;
        row["is_outline"] = occ.is_outline;
        row["license"] = to_string(occ.license_class);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (c != '\r') {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

StepKeyword keyword_from_string(const std::string& s) {
    if (s == "Given") return StepKeyword::Given;
    if (s == "When") return StepKeyword::When;
    if (s == "Then") return StepKeyword::Then;
    if (s == "But") return StepKeyword::But;
    return StepKeyword::And;
}

}  // namespace

std::vector<StepOccurrence> read_steps_table_csv(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("missing artifact: " + file.string());
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty steps table: " + file.string());
    std::vector<StepOccurrence> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != steps_table_columns().size())
            throw DataError(file.string() + ":" + std::to_string(line_no) +
                            ": expected 10 columns, got " + std::to_string(fields.size()));
        StepOccurrence occ;
        occ.repo_id = fields[0];
        occ.path = fields[1];
        occ.line_no = std::stoi(fields[2]);
        occ.keyword = keyword_from_string(fields[3]);
        occ.raw_text = fields[4];
        occ.normalized_text = fields[5];
        occ.identity_digest = fields[6];
        occ.is_background = fields[7] == "1";
        occ.is_outline = fields[8] == "1";
        occ.license_class = license_class_from_string(fields[9]);
        out.push_back(std::move(occ));
    }
    return out;
}

ordered_json clusters_to_json(const std::vector<Cluster>& clusters,
                              const std::vector<StepOccurrence>& occurrences,
                              bool include_members) {
    ordered_json out = ordered_json::array();
    for (const auto& c : clusters) {
        ordered_json row;
        row["strategy"] = to_string(c.strategy);
        row["canonical_text"] = c.canonical_text;
        row["occurrence_count"] = c.occurrence_count;
        row["distinct_files"] = c.distinct_files;
        row["distinct_repos"] = c.distinct_repos;
        if (include_members) {
            ordered_json members = ordered_json::array();
            for (std::size_t m : c.members) {
                ordered_json member;
                member["repo"] = occurrences[m].repo_id;
                member["path"] = occurrences[m].path;
                member["line"] = occurrences[m].line_no;
                members.push_back(std::move(member));
            }
            row["members"] = std::move(members);
        }
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

std::string html_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
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

void render_json_html(const ordered_json& value, std::ostream& out) {
    if (value.is_array() && !value.empty() && value.front().is_object()) {
        // Array of homogeneous objects renders as a table.
        out << "<table><thead><tr>";
        for (auto it = value.front().begin(); it != value.front().end(); ++it)
            out << "<th>" << html_escape(it.key()) << "</th>";
        out << "</tr></thead><tbody>";
        for (const auto& row : value) {
            out << "<tr>";
            for (auto it = row.begin(); it != row.end(); ++it) {
                if (it.value().is_structured())
                    out << "<td><code>" << html_escape(it.value().dump()) << "</code></td>";
                else if (it.value().is_string())
                    out << "<td>" << html_escape(it.value().get<std::string>()) << "</td>";
                else
                    out << "<td>" << it.value().dump() << "</td>";
            }
            out << "</tr>";
        }
        out << "</tbody></table>";
    } else {
        out << "<pre>" << html_escape(value.dump(2)) << "</pre>";
    }
}

}  // namespace

std::string html_report(const std::string& title, const ordered_json& meta,
                        const std::vector<std::pair<std::string, ordered_json>>& sections) {
    std::ostringstream out;
    out << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>" << html_escape(title)
        << "</title>\n<style>\n"
        << "body{font-family:sans-serif;margin:2em;max-width:70em}\n"
        << "table{border-collapse:collapse;margin:1em 0}\n"
        << "th,td{border:1px solid #999;padding:0.3em 0.6em;text-align:left}\n"
        << "th{background:#eee}\npre{background:#f6f6f6;padding:0.8em;overflow-x:auto}\n"
        << "</style></head><body>\n<h1>" << html_escape(title) << "</h1>\n";
    out << "<h2>run</h2>";
    render_json_html(meta, out);
    for (const auto& [name, data] : sections) {
        out << "\n<h2>" << html_escape(name) << "</h2>";
        render_json_html(data, out);
    }
    out << "\n</body></html>\n";
    return out.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace stepdedup
