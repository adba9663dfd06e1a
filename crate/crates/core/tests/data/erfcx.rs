/// `(x, E_{1/2,1}(-x))`, `x = 5i/99`.
const ERFCX_TABLE: &[(f64, f64)] = &[
    (0.0, 1.0),
    (0.050505050505050504, 0.94546816039148363534),
    (0.10101010101010101, 0.89549912267910653338),
    (0.15151515151515152, 0.84961508354909446433),
    (0.20202020202020202, 0.80739636036402187796),
    (0.25252525252525254, 0.76847348635799878593),
    (0.30303030303030304, 0.73252048047733064522),
    (0.35353535353535354, 0.69924910407044162982),
    (0.40404040404040403, 0.66840394857993480337),
    (0.45454545454545453, 0.63975822460219196947),
    (0.5050505050505051, 0.61311014423607414094),
    (0.5555555555555556, 0.58827980641002864345),
    (0.6060606060606061, 0.56510650955530367587),
    (0.6565656565656566, 0.54344642814634953322),
    (0.7070707070707071, 0.52317059971445006685),
    (0.7575757575757576, 0.50416317732745863285),
    (0.8080808080808081, 0.48631990951814483641),
    (0.8585858585858586, 0.46954681548121368827),
    (0.9090909090909091, 0.45375902824462729416),
    (0.9595959595959596, 0.43887978261812325576),
    (1.0101010101010102, 0.42483952816496619333),
    (1.0606060606060606, 0.41157515034221905691),
    (1.1111111111111112, 0.39902928540091708736),
    (1.1616161616161615, 0.3871497167053207254),
    (1.2121212121212122, 0.37588884188176999029),
    (1.2626262626262625, 0.36520320169380563906),
    (1.3131313131313131, 0.35505306280366103953),
    (1.3636363636363635, 0.34540204765632105807),
    (1.4141414141414141, 0.33621680564051857854),
    (1.4646464646464648, 0.32746672046587811706),
    (1.5151515151515151, 0.31912364936745122112),
    (1.5656565656565657, 0.31116169032533719174),
    (1.6161616161616161, 0.3035569739823793504),
    (1.6666666666666667, 0.29628747736921129969),
    (1.7171717171717171, 0.2893328569134263499),
    (1.7676767676767677, 0.28267429852697310074),
    (1.8181818181818181, 0.27629438284033706003),
    (1.8686868686868687, 0.27017696388981259813),
    (1.9191919191919191, 0.26430705977043998632),
    (1.9696969696969697, 0.25867075394641325243),
    (2.0202020202020203, 0.25325510606674226919),
    (2.0707070707070705, 0.24804807126988975514),
    (2.121212121212121, 0.24303842707975380831),
    (2.1717171717171717, 0.23821570709907493065),
    (2.2222222222222223, 0.23357014079712214277),
    (2.272727272727273, 0.22909259876808397962),
    (2.323232323232323, 0.22477454290643116161),
    (2.3737373737373737, 0.22060798100690446839),
    (2.4242424242424243, 0.21658542535080918639),
    (2.474747474747475, 0.2126998548879085884),
    (2.525252525252525, 0.20894468066522396705),
    (2.5757575757575757, 0.20531371419116834002),
    (2.6262626262626263, 0.20180113845628052271),
    (2.676767676767677, 0.19840148136091156638),
    (2.727272727272727, 0.19510959132601121297),
    (2.7777777777777777, 0.19192061488606359239),
    (2.8282828282828283, 0.18882997608358096831),
    (2.878787878787879, 0.18583335750268188641),
    (2.9292929292929295, 0.18292668279542450317),
    (2.9797979797979797, 0.18010610056896506196),
    (3.0303030303030303, 0.17736796951447026168),
    (3.080808080808081, 0.17470884467020794845),
    (3.1313131313131315, 0.17212546472152701268),
    (3.1818181818181817, 0.16961474024965439633),
    (3.2323232323232323, 0.16717374284950155589),
    (3.282828282828283, 0.16479969504409323486),
    (3.3333333333333335, 0.16248996092989842926),
    (3.3838383838383836, 0.16024203749334221312),
    (3.4343434343434343, 0.15805354654417724376),
    (3.484848484848485, 0.15592222721626204111),
    (3.5353535353535355, 0.15384592899068388022),
    (3.585858585858586, 0.15182260520013036308),
    (3.6363636363636362, 0.14985030697699757523),
    (3.686868686868687, 0.14792717761096531949),
    (3.7373737373737375, 0.14605144728470636696),
    (3.787878787878788, 0.14422142815905702554),
    (3.8383838383838382, 0.1424355097813906668),
    (3.888888888888889, 0.14069215479312670337),
    (3.9393939393939394, 0.13898989491429907429),
    (3.98989898989899, 0.13732732718491843836),
    (4.040404040404041, 0.13570311044451083053),
    (4.090909090909091, 0.13411596203271635873),
    (4.141414141414141, 0.1325646546952000034),
    (4.191919191919192, 0.13104801368037523698),
    (4.242424242424242, 0.12956491401358100371),
    (4.292929292929293, 0.12811427793639382371),
    (4.343434343434343, 0.12669507249971027355),
    (4.393939393939394, 0.12530630730010525675),
    (4.444444444444445, 0.12394703234977111969),
    (4.494949494949495, 0.12261633607107327378),
    (4.545454545454546, 0.12131334340742890762),
    (4.595959595959596, 0.12003721404283188891),
    (4.646464646464646, 0.11878714072291111592),
    (4.696969696969697, 0.11756234767093052179),
    (4.747474747474747, 0.11636208909261601066),
    (4.797979797979798, 0.1151856477641344472),
    (4.848484848484849, 0.11403233369795537074),
    (4.898989898989899, 0.11290148288169868197),
    (4.94949494949495, 0.11179245608541563681),
    (5.0, 0.11070463773306862637),
];

