#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stratum/matrix_basis.hpp"
#include "stratum/sommerfeld.hpp"
#include "stratum/spectral_tetm.hpp"
#include "stratum/stack_io.hpp"
#include "stratum/transmission.hpp"
#include "validate.hpp"

using namespace stratum;
using nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kValidationFailed = 1, kConfig = 2, kAccuracy = 3 };

std::vector<double> parse_list(const std::string &text, std::size_t n, const std::string &what)
{
	std::vector<double> out;
	std::stringstream ss(text);
	std::string item;
	while (std::getline(ss, item, ','))
	{
		std::size_t pos = 0;
		double v = 0.0;
		try
		{
			v = std::stod(item, &pos);
		}
		catch (const std::exception &)
		{
			throw ConfigError(what + ": cannot parse '" + item + "'");
		}
		if (pos != item.size() || !std::isfinite(v))
			throw ConfigError(what + ": '" + item + "' is not a finite number");
		out.push_back(v);
	}
	if (out.size() != n)
		throw ConfigError(what + " needs " + std::to_string(n) + " comma-separated values");
	return out;
}

Vec3 parse_point(const std::string &text, const std::string &what)
{
	const auto v = parse_list(text, 3, what);
	return {v[0], v[1], v[2]};
}

json real_matrix(const Eigen::Matrix3d &m)
{
	json rows = json::array();
	for (int i = 0; i < 3; i++)
		rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
	return rows;
}

void csv_matrix(std::ostream &os, const std::string &name, const Mat3 &m)
{
	for (int i = 0; i < 3; i++)
		for (int j = 0; j < 3; j++)
			os << name << ',' << i << ',' << j << ',' << std::setprecision(17) << m(i, j).real() << ','
			   << m(i, j).imag() << '\n';
}

struct Options
{
	std::string stack_path;
	std::string source, target, spectral;
	std::string out = "json";
	std::string formulation = "standard";
	std::uint64_t seed = 1;
	QuadratureSpec quad;
	std::string suite;
	double krho_min = 0.01, krho_max = 10.0;
	int samples = 200;
	std::string zs;
};

Formulation parse_formulation(const std::string &s)
{
	if (s == "standard")
		return Formulation::Standard;
	if (s == "tetm")
		return Formulation::TeTm;
	if (s == "basis")
		return Formulation::MatrixBasis;
	throw ConfigError("unknown formulation '" + s + "'");
}

int run_spectral(const Options &o, const LayerStack &stack)
{
	const auto k = parse_list(o.spectral, 2, "--spectral");
	const Vec3 r = parse_point(o.target, "--target"), rp = parse_point(o.source, "--source");
	const Formulation form = parse_formulation(o.formulation);
	const bool basis = form == Formulation::MatrixBasis;
	const DyadicSample e = basis ? spectral_dyadic_e_basis(stack, k[0], k[1], r[2], rp[2])
								 : spectral_dyadic_e(stack, k[0], k[1], r[2], rp[2]);
	const DyadicSample h = basis ? spectral_dyadic_h_basis(stack, k[0], k[1], r[2], rp[2])
								 : spectral_dyadic_h(stack, k[0], k[1], r[2], rp[2]);
	const Mat3 re = spectral_reaction_e(stack, k[0], k[1], r[2], rp[2]);
	const Mat3 rh = spectral_reaction_h(stack, k[0], k[1], r[2], rp[2]);

	if (o.out == "csv")
	{
		std::cout << "quantity,row,col,re,im\n";
		csv_matrix(std::cout, "G_E", e.value);
		csv_matrix(std::cout, "G_H", h.value);
		csv_matrix(std::cout, "reaction_E", re);
		csv_matrix(std::cout, "reaction_H", rh);
		return kOk;
	}
	json doc;
	doc["domain"] = "spectral";
	doc["kx"] = k[0];
	doc["ky"] = k[1];
	doc["z"] = r[2];
	doc["zp"] = rp[2];
	doc["G_E"] = to_json(e.value);
	doc["G_H"] = to_json(h.value);
	doc["has_delta"] = e.has_delta || h.has_delta;
	doc["free"] = {{"E", to_json(Mat3(e.value - re))}, {"H", to_json(Mat3(h.value - rh))}};
	doc["reaction"] = {{"E", to_json(re)}, {"H", to_json(rh)}};
	std::cout << dump_json(doc) << '\n';
	return kOk;
}

int run_eval(const Options &o, const LayerStack &stack)
{
	if (!o.spectral.empty())
		return run_spectral(o, stack);
	const Vec3 r = parse_point(o.target, "--target"), rp = parse_point(o.source, "--source");
	const PhysicalSample ps = physical_dyadics(stack, r, rp, o.quad, parse_formulation(o.formulation));

	Mat3 re = Mat3::Zero(), rh = Mat3::Zero();
	for (int b = 0; b < 4; b++)
	{
		re += ps.reaction_E[b];
		rh += ps.reaction_H[b];
	}
	std::cerr << "eval: target layer " << ps.ell << ", source layer " << ps.src << ", cutoff " << ps.cutoff << ", "
			  << ps.panels << " panels, max error estimate " << std::max(ps.error_E.maxCoeff(), ps.error_H.maxCoeff())
			  << '\n';
	if (o.out == "csv")
	{
		std::cout << "quantity,row,col,re,im\n";
		csv_matrix(std::cout, "G_E", ps.G_E);
		csv_matrix(std::cout, "G_H", ps.G_H);
		csv_matrix(std::cout, "free_E", ps.free_E);
		csv_matrix(std::cout, "free_H", ps.free_H);
		csv_matrix(std::cout, "reaction_E", re);
		csv_matrix(std::cout, "reaction_H", rh);
		return kOk;
	}
	json doc;
	doc["domain"] = "physical";
	doc["target"] = r;
	doc["source"] = rp;
	doc["target_layer"] = ps.ell;
	doc["source_layer"] = ps.src;
	doc["G_E"] = to_json(ps.G_E);
	doc["G_H"] = to_json(ps.G_H);
	doc["free"] = {{"E", to_json(ps.free_E)}, {"H", to_json(ps.free_H)}};
	json branches = json::object();
	const char *names[4] = {"up_up", "up_down", "down_up", "down_down"};
	for (int b = 0; b < 4; b++)
		branches[names[b]] = {{"E", to_json(ps.reaction_E[b])}, {"H", to_json(ps.reaction_H[b])}};
	doc["reaction"] = {{"E", to_json(re)}, {"H", to_json(rh)}, {"branches", branches}};
	doc["error"] = {{"E", real_matrix(ps.error_E)}, {"H", real_matrix(ps.error_H)}};
	doc["cutoff"] = ps.cutoff;
	doc["panels"] = ps.panels;
	std::cout << dump_json(doc) << '\n';
	return kOk;
}

int run_dump_densities(const Options &o, const LayerStack &stack)
{
	if (o.samples < 2 || !(o.krho_min > 0.0) || !(o.krho_max > o.krho_min))
		throw ConfigError("dump-densities needs 0 < krho-min < krho-max and at least 2 samples");
	const double zp = parse_point(o.source, "--source")[2];
	const int src = layer_of(stack, zp);
	const JumpWeight w = o.formulation == "eps" ? JumpWeight::eps(stack) : JumpWeight::mu(stack);
	std::cout << std::setprecision(17)
			  << "krho,ell,uu_re,uu_im,ud_re,ud_im,du_re,du_im,dd_re,dd_im\n";
	for (int i = 0; i < o.samples; i++)
	{
		const double kr = o.krho_min + (o.krho_max - o.krho_min) * i / (o.samples - 1);
		const DensitySet ds = densities(stack, w, kr, src);
		for (int l = 0; l <= stack.L(); l++)
		{
			std::cout << kr << ',' << l;
			for (int b = 0; b < 4; b++)
				std::cout << ',' << ds.sigma[l][b].real() << ',' << ds.sigma[l][b].imag();
			std::cout << '\n';
		}
	}
	return kOk;
}

int report(const std::vector<cli::SuiteReport> &reports)
{
	bool ok = true;
	json doc = json::array();
	for (const auto &rep : reports)
	{
		std::cerr << "[" << rep.suite << "]\n";
		json checks = json::array();
		for (const auto &c : rep.checks)
		{
			std::cerr << "  " << (c.pass ? "PASS " : "FAIL ") << c.name << ": measured " << std::setprecision(3)
					  << std::scientific << c.measured << " <= " << c.tolerance << std::defaultfloat;
			if (!c.detail.empty())
				std::cerr << " (" << c.detail << ")";
			std::cerr << '\n';
			checks.push_back({{"name", c.name}, {"measured", c.measured}, {"tolerance", c.tolerance}, {"pass", c.pass}});
		}
		ok = ok && rep.passed();
		doc.push_back({{"suite", rep.suite}, {"pass", rep.passed()}, {"checks", checks}});
	}
	std::cout << dump_json(doc) << '\n';
	std::cerr << (ok ? "all checks passed" : "validation FAILED") << '\n';
	return ok ? kOk : kValidationFailed;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"Dyadic Green's functions of planar layered media"};
	app.require_subcommand(1, 1);
	Options o;

	auto add_stack = [&](CLI::App *sub, bool required) {
		auto *opt = sub->add_option("--stack", o.stack_path, "Layer stack JSON file");
		if (required)
			opt->required();
	};
	auto add_quad = [&](CLI::App *sub) {
		sub->add_option("--rel-tol", o.quad.rel_tol, "Relative quadrature tolerance");
		sub->add_option("--abs-tol", o.quad.abs_tol, "Absolute quadrature tolerance");
		sub->add_option("--max-krho", o.quad.max_krho, "Truncation point (0 = automatic)");
		sub->add_option("--max-panels", o.quad.max_panels, "Panel budget");
	};
	auto add_out = [&](CLI::App *sub) {
		sub->add_option("--out", o.out, "Output format")->check(CLI::IsMember({"json", "csv"}));
	};

	auto *eval = app.add_subcommand("eval", "Evaluate G_E and G_H at a source/target pair");
	add_stack(eval, true);
	eval->add_option("--source", o.source, "x,y,z")->required();
	eval->add_option("--target", o.target, "x,y,z")->required();
	eval->add_option("--spectral", o.spectral, "kx,ky: evaluate the spectral dyadics instead");
	eval->add_option("--formulation", o.formulation, "standard | tetm | basis");
	add_quad(eval);
	add_out(eval);

	auto *spectral = app.add_subcommand("spectral", "Spectral dyadics at (kx, ky, z, z')");
	add_stack(spectral, true);
	spectral->add_option("--source", o.source, "x,y,z (only z is used)")->required();
	spectral->add_option("--target", o.target, "x,y,z (only z is used)")->required();
	spectral->add_option("--k", o.spectral, "kx,ky")->required();
	spectral->add_option("--formulation", o.formulation, "tetm | basis");
	add_out(spectral);

	auto *dump = app.add_subcommand("dump-densities", "CSV of reaction densities over a k_rho sweep");
	add_stack(dump, true);
	dump->add_option("--source", o.source, "x,y,z (only z is used)")->required();
	dump->add_option("--family", o.formulation, "mu | eps")->check(CLI::IsMember({"mu", "eps"}));
	dump->add_option("--krho-min", o.krho_min, "First k_rho of the sweep (> 0)");
	dump->add_option("--krho-max", o.krho_max, "Last k_rho of the sweep");
	dump->add_option("--samples", o.samples, "Number of equally spaced k_rho values");

	auto *table = app.add_subcommand("table", "Verify the 9x9 basis product table");
	table->add_option("--seed", o.seed, "Seed for the sample points");

	auto *validate = app.add_subcommand("validate", "Run a validation suite");
	validate->add_option("suite", o.suite, "sommerfeld-identity | equivalence | homogeneous-limit | interface-jumps | "
										   "product-table | oracle | all")
		->required();
	add_stack(validate, false);
	validate->add_option("--seed", o.seed, "Seed for randomized cases");

	try
	{
		app.parse(argc, argv);
	}
	catch (const CLI::ParseError &e)
	{
		const int rc = app.exit(e);
		return rc == 0 ? kOk : kConfig;
	}

	try
	{
		if (table->parsed())
			return report(cli::run_suite("product-table", LayerStack{}, o.seed, 1));

		const LayerStack stack = o.stack_path.empty() ? LayerStack{} : load_stack(o.stack_path);
		if (eval->parsed())
			return run_eval(o, stack);
		if (spectral->parsed())
		{
			if (o.formulation == "standard")
				o.formulation = "tetm";
			return run_spectral(o, stack);
		}
		if (dump->parsed())
			return run_dump_densities(o, stack);
		if (validate->parsed())
		{
			if (o.suite != "product-table" && o.suite != "sommerfeld-identity" && o.stack_path.empty())
				throw ConfigError("validate " + o.suite + " needs --stack");
			return report(cli::run_suite(o.suite, stack, o.seed, cli::thread_limit()));
		}
	}
	catch (const ConfigError &e)
	{
		std::cerr << "configuration error: " << e.what() << '\n';
		return kConfig;
	}
	catch (const DomainError &e)
	{
		std::cerr << "domain error: " << e.what() << '\n';
		return kConfig;
	}
	catch (const DegenerateDirectionError &e)
	{
		std::cerr << "degenerate direction: " << e.what() << '\n';
		return kConfig;
	}
	catch (const BranchPointError &e)
	{
		std::cerr << "branch point: " << e.what() << '\n';
		return kConfig;
	}
	catch (const AccuracyError &e)
	{
		std::cerr << "accuracy error: " << e.what() << '\n';
		return kAccuracy;
	}
	catch (const PoleError &e)
	{
		std::cerr << "pole: " << e.what() << '\n';
		return kAccuracy;
	}
	return kConfig;
}
