#include "nirvana/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace nirvana::io
{

namespace
{

std::size_t checked_dim(const json& j)
{
	if(!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im"))
		throw InputError("expected an object with dim, re and im");
	const auto dim = j.at("dim").get<long long>();
	if(dim <= 0)
		throw InputError("dim must be positive");
	if(!j.at("re").is_array() || !j.at("im").is_array() || j.at("re").size() != j.at("im").size())
		throw InputError("re and im must be arrays of equal length");
	return static_cast<std::size_t>(dim);
}

std::vector<double> numbers(const json& arr)
{
	std::vector<double> out;
	out.reserve(arr.size());
	for(const auto& x : arr)
	{
		if(!x.is_number())
			throw InputError("expected a number");
		out.push_back(x.get<double>());
	}
	return out;
}

json number_array(const std::vector<double>& v)
{
	json arr = json::array();
	for(double x : v)
		arr.push_back(x == 0.0 ? 0.0 : x); // fold -0
	return arr;
}

json components_json(const std::vector<CVector>& comps)
{
	json re = json::array(), im = json::array();
	for(const auto& c : comps)
	{
		std::vector<double> r(static_cast<std::size_t>(c.size())), i(static_cast<std::size_t>(c.size()));
		for(Eigen::Index k = 0; k < c.size(); ++k)
		{
			r[static_cast<std::size_t>(k)] = c(k).real();
			i[static_cast<std::size_t>(k)] = c(k).imag();
		}
		re.push_back(number_array(r));
		im.push_back(number_array(i));
	}
	return {{"re", re}, {"im", im}};
}

json diagnostics_json(const std::map<std::string, std::vector<double>>& d)
{
	json out = json::object();
	for(const auto& [name, values] : d)
		out[name] = number_array(values);
	return out;
}

} // namespace

json to_json(const CMatrix& m)
{
	std::vector<double> re, im;
	for(Eigen::Index i = 0; i < m.rows(); ++i)
		for(Eigen::Index j = 0; j < m.cols(); ++j)
		{
			re.push_back(m(i, j).real());
			im.push_back(m(i, j).imag());
		}
	return {{"dim", m.rows()}, {"re", number_array(re)}, {"im", number_array(im)}};
}

json to_json(const CVector& v)
{
	std::vector<double> re, im;
	for(Eigen::Index i = 0; i < v.size(); ++i)
	{
		re.push_back(v(i).real());
		im.push_back(v(i).imag());
	}
	return {{"dim", v.size()}, {"re", number_array(re)}, {"im", number_array(im)}};
}

json to_json(const RVector& v)
{
	return number_array(std::vector<double>(v.data(), v.data() + v.size()));
}

CMatrix matrix_from_json(const json& j)
{
	const auto n = checked_dim(j);
	const auto re = numbers(j.at("re"));
	const auto im = numbers(j.at("im"));
	if(re.size() != n * n)
		throw InputError("matrix needs dim*dim entries");
	const auto dn = static_cast<Eigen::Index>(n);
	CMatrix m(dn, dn);
	for(Eigen::Index i = 0; i < dn; ++i)
		for(Eigen::Index k = 0; k < dn; ++k)
		{
			const auto idx = static_cast<std::size_t>(i * dn + k);
			m(i, k) = cplx(re[idx], im[idx]);
		}
	return m;
}

CVector vector_from_json(const json& j)
{
	const auto n = checked_dim(j);
	const auto re = numbers(j.at("re"));
	const auto im = numbers(j.at("im"));
	if(re.size() != n)
		throw InputError("vector needs dim entries");
	CVector v(static_cast<Eigen::Index>(n));
	for(std::size_t k = 0; k < n; ++k)
		v(static_cast<Eigen::Index>(k)) = cplx(re[k], im[k]);
	return v;
}

json to_json(const TensorSplit& split)
{
	return split.factor_dims();
}

TensorSplit split_from_json(const json& j)
{
	if(!j.is_array())
		throw InputError("split must be an array of factor dimensions");
	std::vector<std::size_t> dims;
	for(const auto& d : j)
	{
		if(!d.is_number_integer() || d.get<long long>() < 2)
			throw InputError("factor dimensions must be integers >= 2");
		dims.push_back(d.get<std::size_t>());
	}
	return TensorSplit(std::move(dims));
}

json to_json(const Factorization& f)
{
	json labels = json::array();
	for(const auto& l : f.labels())
		labels.push_back(l);
	return {{"split", to_json(f.split())}, {"basis", to_json(f.basis().matrix())}, {"labels", labels}};
}

Factorization factorization_from_json(const json& j)
{
	if(!j.is_object() || !j.contains("split") || !j.contains("basis"))
		throw InputError("factorization needs split and basis");
	TensorSplit split = split_from_json(j.at("split"));
	OrthonormalBasis basis(matrix_from_json(j.at("basis")));
	if(!j.contains("labels"))
		return Factorization::row_major(std::move(basis), std::move(split));
	std::vector<MultiIndex> labels;
	for(const auto& l : j.at("labels"))
		labels.push_back(l.get<MultiIndex>());
	return Factorization(std::move(basis), std::move(split), std::move(labels));
}

json to_json(const BasisTrajectory& frames)
{
	json arr = json::array();
	for(const auto& f : frames.frames())
		arr.push_back(to_json(f));
	return {{"times", number_array(frames.times())}, {"frames", arr}};
}

json to_json(const SpectrumDecomposition& d)
{
	json factors = json::array();
	for(const auto& f : d.factors)
		factors.push_back(number_array(f));
	return {{"factors", factors}, {"residual", d.residual}};
}

json to_json(const LocalDecomposition& d)
{
	return {{"split", to_json(d.split)},
	        {"h1", to_json(d.h1)},
	        {"h2", to_json(d.h2)},
	        {"c", d.c},
	        {"hint", to_json(d.hint)},
	        {"hint_norm", d.interaction_norm()}};
}

json to_json(const EvolutionTrace& trace)
{
	json out = {{"times", number_array(trace.times)}, {"diagnostics", diagnostics_json(trace.diagnostics)}};
	if(!trace.components.empty())
		out["components"] = components_json(trace.components);
	for(const auto& [name, comps] : trace.extra_components)
		out["extra_components"][name] = components_json(comps);
	return out;
}

json to_json(const FactorizationReport& report)
{
	json out;
	out["kind"] = to_string(report.kind);
	out["objective_value"] = report.objective_value;
	if(const auto* f = std::get_if<Factorization>(&report.factorization))
		out["factorization"] = to_json(*f);
	else if(const auto* t = std::get_if<BasisTrajectory>(&report.factorization))
		out["factorization"] = to_json(*t);
	else
		out["factorization"] = nullptr;
	out["sumset"] = report.sumset ? to_json(*report.sumset) : json(nullptr);
	out["times"] = number_array(report.times);
	out["diagnostics"] = diagnostics_json(report.story);
	if(!report.components.empty())
		out["components"] = components_json(report.components);
	out["notes"] = report.notes;
	out["checks"] = report.checks;
	if(report.kind == FactorizationKind::optimized)
	{
		out["objective_trace"] = number_array(report.objective_trace);
		out["iterations"] = report.iterations;
		out["converged"] = report.converged;
	}
	return out;
}

std::vector<double> parse_real_list(const std::string& text)
{
	const auto first = text.find_first_not_of(" \t\r\n");
	if(first != std::string::npos && (text[first] == '[' || text[first] == '{'))
	{
		json j;
		try
		{
			j = json::parse(text);
		}
		catch(const json::parse_error& e)
		{
			throw InputError(std::string("malformed JSON: ") + e.what());
		}
		if(j.is_object())
		{
			if(!j.contains("spectrum"))
				throw InputError("object must contain a spectrum array");
			j = j.at("spectrum");
		}
		if(!j.is_array())
			throw InputError("expected an array of reals");
		return numbers(j);
	}
	std::string cleaned = text;
	for(auto& ch : cleaned)
		if(ch == ',')
			ch = ' ';
	std::istringstream is(cleaned);
	std::vector<double> out;
	std::string token;
	while(is >> token)
	{
		std::size_t used = 0;
		double x = 0.0;
		try
		{
			x = std::stod(token, &used);
		}
		catch(const std::exception&)
		{
			throw InputError("not a number: " + token);
		}
		if(used != token.size())
			throw InputError("not a number: " + token);
		out.push_back(x);
	}
	return out;
}

std::string read_text(const std::filesystem::path& path)
{
	std::ifstream in(path);
	if(!in)
		throw InputError("cannot open " + path.string());
	std::ostringstream os;
	os << in.rdbuf();
	return os.str();
}

json read_json(const std::filesystem::path& path)
{
	try
	{
		return json::parse(read_text(path));
	}
	catch(const json::parse_error& e)
	{
		throw InputError(path.string() + ": malformed JSON: " + e.what());
	}
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
	if(path.has_parent_path())
		std::filesystem::create_directories(path.parent_path());
	std::ofstream out(path);
	if(!out)
		throw Error("cannot write " + path.string());
	out << text;
}

std::string dump(const json& j)
{
	return j.dump(2) + "\n";
}

} // namespace nirvana::io
