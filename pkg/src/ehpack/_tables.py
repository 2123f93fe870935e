# Generated numeric tables.

ALPHA_SQUARE = {
    19: "0.11526431542309074",
    20: "0.17175402209391144",
    21: "0.14364948238440467",
    22: "0.17775964679070577",
    23: "0.16247599807416024",
    24: "0.17013150154133094",
    25: "0.17218382694021506",
    26: "0.17186065470253054",
    27: "0.1712411485735466",
    28: "0.17115325420709004",
    29: "0.011808683266528508",
    30: "0.08864616236688028",
    31: "0.0746578085809842",
    32: "0.1392973955221088",
    33: "0.20463684875950888",
    34: "0.11988863237025116",
    35: "0.1489855469399089",
    36: "0.42658319200096906",
    37: "0.3313855159770591",
    38: "0.26591984078589526",
    39: "0.23652286713889142",
    40: "0.17320945474790095",
    41: "0.2907287245318693",
    42: "0.27690915366279856",
    43: "0.35186597263941155",
    44: "0.28487022531216166",
    45: "0.3405383352070134",
    46: "0.13927977565087557",
    47: "0.12478043051170912",
    48: "0.17368906765817593",
    49: "0.049341692986982266",
    50: "0.21756972846743544",
    51: "0.15176378068862706",
    52: "0.27986004047748236",
    53: "0.09140290314421057",
    54: "0.16115290643799296",
    55: "0.10509477906408826",
    56: "0.07908677596102542",
    57: "0.06049271754448721",
    58: "0.027902842302122366",
    59: "0.03757222734769261",
    60: "0.044034294107809235",
    61: "0.04169873464584284",
    62: "0.045855398808323844",
    63: "0.03268220721227799",
    64: "0.020287554239005412",
    65: "0.03662245261759983",
    66: "0.05299014948250891",
    67: "0.05837546569384355",
    68: "0.06021197613253543",
    69: "0.05286287383333055",
    70: "0.041141831190207534",
    71: "0.025858702537442546",
    72: "0.03667621572334345",
    73: "0.05790545597682889",
    74: "0.0249935407107143",
    75: "0.05090633446809589",
    76: "0.04180489086300371",
    77: "0.0598352802367374",
    78: "0.04622400142944383",
    79: "0.06598393751625004",
    80: "0.015819026610491616",
    81: "0.014052365574156844",
    82: "0.019542717826361966",
    83: "0.02093163772726897",
    84: "0.03232182211334006",
    85: "0.035404672067686827",
    86: "0.04160032480693088",
    87: "0.03084632143248167",
    88: "0.03218274376106067",
    89: "0.027386520210324672",
    90: "0.0467579925718552",
    91: "0.03515363399072097",
    92: "0.009522308778970257",
    93: "0.050007623111272215",
    94: "0.027397549490475293",
    95: "0.040108142281991443",
    96: "0.04060265542768865",
    97: "0.06176115933187615",
    98: "0.05149748670123738",
    99: "0.030976848369531906",
    100: "0.04985378105030419",
    101: "0.02428257540185641",
    102: "0.039279772504672905",
    103: "0.018431969726226516",
    104: "0.01615117687134704",
    105: "0.033836619264623",
    106: "0.021684498478341585",
    107: "0.018653119555053665",
    108: "0.017510378838004492",
    109: "0.005027225774378641",
    110: "0.0050070660422215085",
    111: "0.008641122238781884",
    112: "0.0114109321956688",
    113: "0.00017017085816917188",
    114: "0.007227843412475732",
    115: "0.02380064289496081",
    116: "0.024626599428481333",
    117: "0.0002926203031912711",
    118: "0.00367483614722508",
    119: "0.003637542351726364",
    120: "0.0022174466541568516",
    121: "0.003972815375790473",
    122: "0.0063500940342546275",
    123: "0.0008190666659831924",
    124: "0.006404294461389681",
    125: "0.0772226658137164",
    126: "0.002848362891246903",
    127: "0.0012952627416890072",
    128: "0.017932379180303493",
    129: "0.007137167661640409",
    130: "0.03712900994359092",
    131: "0.0029178803264349185",
    132: "0.015565067465901694",
    133: "0.0007797083742386857",
    134: "0.045217214440781583",
    135: "0.0013741843692585687",
    136: "0.0003354018167419648",
    137: "0.0012121494697902024",
    138: "0.015325390110678683",
    139: "0.0028034548030816953",
    140: "0.0415339431984868",
    141: "0.002954384831987067",
    142: "0.028214095268082884",
    143: "0.008801691293012892",
    144: "0.011981667605959034",
    145: "0",
    146: "0.04442994587106425",
    147: "0.0025122969557108132",
    148: "0.005897723663266186",
    149: "0.0008298536197157702",
    150: "0.003146593473569992",
    151: "0.007423928474611485",
}

ALPHA_CUBE = {
    19: "0.23560671174940934",
    20: "0.24349456708719025",
    21: "0.011054757786850555",
    22: "0.09233137770530553",
    23: "0.10296544873687286",
    24: "0.09980866333707894",
    25: "0.11275956304754697",
    26: "0.10573246664180191",
    27: "0.21831169314212995",
    28: "0.16810602509149197",
    29: "0.28469363087983357",
    30: "0.46134537517964436",
    31: "0.4754821887062161",
    32: "0.4834778208599464",
    33: "0.38230203454521344",
    34: "0.20815458494242878",
    35: "0.2094357013281899",
    36: "0.6476643335428202",
    37: "0.4846417112019235",
    38: "0.3459551479018446",
    39: "0.1967822914561262",
    40: "0.22903844377204607",
    41: "0.38585033090166515",
    42: "0.2633509344925706",
    43: "0.37148866892244403",
    44: "0.3228819685751433",
    45: "0.294966161863426",
    46: "0.11613078486074929",
    47: "0.21976007519116803",
    48: "0.2367222519372697",
    49: "0.06874946889000572",
    50: "0.30801878565803864",
    51: "0.10874307802527139",
    52: "0.34382124885682674",
    53: "0.19822255924214388",
    54: "0.21657253679087018",
    55: "0.21064008575188697",
    56: "0.5286073975827003",
    57: "0.23593465027098925",
    58: "0.10627837309910759",
    59: "0.08778737037136902",
    60: "0.0628782883568702",
    61: "0.07892306409577904",
    62: "0.06811428634665145",
    63: "0.08934119933293255",
    64: "0.10985985543445637",
    65: "0.16657268323184893",
    66: "0.16370099694324725",
    67: "0.14763245122124014",
    68: "0.1671268810238925",
    69: "0.18510082544610912",
    70: "0.011723129997064097",
    71: "0.02425242847273701",
    72: "0.011268687510284647",
    73: "0.01566133856254459",
    74: "0.0023807218784999695",
    75: "0",
    76: "0.014065837749926702",
    77: "0.07665846642009927",
    78: "0.08912467432180055",
    79: "0.06724339050226902",
    80: "0.11390203480637812",
    81: "0.1529879344816335",
    82: "0.09257293559305935",
    83: "0.13375170776745032",
    84: "0.10899217160505548",
    85: "0.08961421224461213",
    86: "0.0870469166593813",
    87: "0.11967303625257314",
    88: "0.08625153412085623",
    89: "0.11468071689788334",
    90: "0.09031490851523155",
    91: "0.06420968479797878",
    92: "0.08246536630622064",
    93: "0.06735253993260948",
    94: "0.07986056987421691",
    95: "0.08506428649843378",
    96: "0.06921061897885533",
    97: "0.07888370245488946",
    98: "0.0730839676106615",
    99: "0.07882644193751703",
    100: "0.07855811096717208",
    101: "0.0755618507268449",
    102: "0.06683328717340548",
    103: "0.07109645510485962",
    104: "0.07686292296039537",
    105: "0.09207944256220246",
    106: "0.06792762522935986",
    107: "0.07184860065578008",
    108: "0.09077658256097626",
    109: "0.06892046751777886",
    110: "0.08404266181153941",
    111: "0.05725657878308299",
    112: "0.04505359172704221",
    113: "0.05865839976147119",
    114: "0.06098740030051164",
    115: "0.06750979580178162",
    116: "0.07232664164227215",
    117: "0.07155889973262747",
    118: "0.07655628977344214",
    119: "0.08531209453810662",
    120: "0.07272780537431511",
    121: "0.060692790181056167",
    122: "0.07565018146829666",
    123: "0.07435001036624961",
    124: "0.07641678559172299",
    125: "0.09172841413844901",
    126: "0.09045869915075516",
    127: "0.05284222333171534",
    128: "0.07194325920411004",
    129: "0.08907570891638156",
    130: "0.09267691307775361",
    131: "0.06180156823851851",
    132: "0.057769376722262844",
    133: "0.06774002323306783",
    134: "0.0751076759531758",
    135: "0.12059175834028163",
    136: "0.08660859544741523",
    137: "0.06185526343471609",
    138: "0.06456079230878453",
    139: "0.0636821969541907",
    140: "0.07602483985713077",
    141: "0.08915221681102126",
    142: "0.0984722500891399",
    143: "0.09067271353727313",
    144: "0.09414865557456398",
    145: "0.10168269428760995",
    146: "0.0909148528042305",
    147: "0.09549983384551514",
    148: "0.07970401566114022",
    149: "0.09550429166121593",
    150: "0.11367223296069545",
    151: "0.09621713402681015",
}

# type: (beta, gamma) as tabulated
BETA_GAMMA_TABLE = {
    55: (17, 5),
    56: (18, 5),
    57: (19, 5),
    58: (20, 6),
    59: (21, 6),
    60: (22, 6),
    61: (23, 6),
    67: (27, 8),
    68: (28, 8),
    69: (29, 8),
    70: (30, 9),
    71: (31, 9),
    72: (32, 9),
    73: (33, 9),
    75: (34, 10),
    76: (35, 10),
    77: (36, 10),
    78: (37, 11),
    79: (38, 11),
    80: (39, 11),
    81: (40, 12),
    82: (41, 12),
    83: (42, 12),
    84: (43, 12),
    85: (44, 13),
    86: (45, 13),
    87: (46, 13),
    88: (47, 14),
    89: (48, 14),
    90: (49, 14),
    91: (50, 15),
    92: (51, 15),
    93: (52, 15),
    94: (53, 15),
    95: (54, 16),
    96: (55, 16),
    97: (56, 16),
    98: (57, 17),
    99: (58, 17),
    100: (59, 17),
    101: (60, 18),
    102: (61, 18),
    103: (62, 18),
    104: (63, 18),
    105: (64, 19),
    106: (65, 19),
    107: (66, 19),
    108: (67, 20),
    109: (68, 20),
    110: (69, 20),
    111: (70, 21),
    112: (71, 21),
    113: (72, 21),
    114: (73, 21),
    115: (74, 22),
    116: (75, 22),
    117: (76, 22),
    118: (77, 23),
    119: (78, 23),
    120: (79, 23),
    121: (80, 24),
    122: (81, 24),
    123: (82, 24),
    124: (83, 24),
    125: (84, 25),
    126: (85, 25),
    127: (86, 25),
    128: (87, 26),
    129: (88, 26),
    130: (89, 26),
    131: (90, 27),
    132: (91, 27),
    133: (92, 27),
    134: (92, 27),
    135: (94, 28),
    136: (95, 28),
    137: (96, 28),
    138: (97, 29),
    139: (98, 29),
    140: (98, 29),
    141: (100, 30),
    142: (101, 30),
    143: (102, 30),
    144: (103, 30),
    145: (104, 31),
    146: (105, 31),
    147: (106, 31),
    148: (107, 32),
    149: (108, 32),
    150: (109, 32),
    151: (110, 33),
}

CASE_W_SQUARE = {
    2: "0.5218896004296165",
    3: "0.6367683021976823",
    4: "0.5508161595298383",
    5: "0.6081996168574735",
    6: "0.5966563767881228",
    7: "0.5417242692011557",
    8: "0.6988933681604961",
    9: "0.7677036830017706",
    10: "0.7691331237757477",
    11: "0.773230983786544",
    12: "0.7836563381680435",
    13: "0.7929071522802713",
    14: "0.8113137810136913",
    15: "0.8219971336489986",
    16: "0.872756492818088",
}

CASE_W_CUBE = {
    2: "0.3559465695997889",
    3: "0.3324106710303888",
    4: "0.3547433890555143",
    5: "0.29283548893321054",
    6: "0.2680609843073525",
    7: "0.30382397508342246",
    8: "0.42984690908567424",
    9: "0.7660334876156012",
    10: "0.7674343307466625",
    11: "0.773273461291727",
    12: "0.7932633383349649",
    13: "0.8240834379579076",
    14: "0.8470244201613557",
    15: "0.88618415266251",
    16: "0.9152418129618586",
}
